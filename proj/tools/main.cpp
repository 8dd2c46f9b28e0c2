#include "sepprob/cli.hpp"

int main(int argc, char** argv) { return sepprob::run_cli(argc, argv); }
