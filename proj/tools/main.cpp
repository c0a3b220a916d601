#include "commands.hpp"

int main(int argc, char** argv) { return irfkit::cli::run(argc, argv); }
