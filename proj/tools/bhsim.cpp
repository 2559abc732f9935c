#include "bhs/experiment.hpp"

int main(int argc, char** argv) { return bhs::run_cli(argc, argv); }
