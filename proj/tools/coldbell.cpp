#include "coldbell/cli.hpp"

int main(int argc, char** argv) { return coldbell::cli::run(argc, argv); }
