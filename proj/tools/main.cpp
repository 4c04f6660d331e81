#include "qgsnet/cli.hpp"

int main(int argc, char** argv) { return qgsnet::cli::run(argc, argv); }
