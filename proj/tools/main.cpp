#include "pacesync/cli.hpp"

int main(int argc, char** argv) { return pacesync::cli_main(argc, argv); }
