#include "ymflow/cli.hpp"

int main(int argc, char** argv) { return ymflow::run_cli(argc, argv); }
