#include "fairflow/cli.hpp"

int main(int argc, char** argv) { return fairflow::run_cli(argc, argv); }
