#include "trigdens/cli.hpp"

int main(int argc, char** argv) { return trigdens::cli_main(argc, argv); }
