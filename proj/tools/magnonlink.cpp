#include "magnonlink/cli.hpp"

int main(int argc, char** argv) { return magnonlink::cli_dispatch(argc, argv); }
