#include "freent/harness.hpp"

int main(int argc, char** argv) { return freent::cli_main(argc, argv); }
