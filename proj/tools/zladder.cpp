#include "zladder/harness.hpp"

int main(int argc, char** argv) { return zladder::run_cli(argc, argv); }
