#include <zkpcp/harness/cli.hpp>

int main(int argc, char** argv) { return zkpcp::cli_main(argc, argv); }
