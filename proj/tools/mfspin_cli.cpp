#include "mfspin/io.hpp"

int main(int argc, char** argv) { return mfspin::cli_main(argc, argv); }
