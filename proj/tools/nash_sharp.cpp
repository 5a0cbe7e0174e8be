#include "nash_sharp/cli.hpp"

int main(int argc, char** argv) { return nash_sharp::cli::main(argc, argv); }
