#include "gpsrad/cli.hpp"

int main(int argc, char** argv) { return gpsrad::cli::main(argc, argv); }
