#include "commands.hpp"

int main(int argc, char** argv) { return nasolv::cli::dispatch(argc, argv); }
