#include "planefix/cli.hpp"

int main(int argc, char** argv) { return planefix::cli::run(argc, argv); }
