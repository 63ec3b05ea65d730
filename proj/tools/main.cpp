#include "commands.hpp"

int main(int argc, char** argv) { return casdec::cli::run(argc, argv); }
