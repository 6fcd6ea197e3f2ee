#include "scorecard/cli.hpp"

int main(int argc, char** argv) { return scorecard::run_cli(argc, argv); }
