#include "expdens/cli.hpp"

int main(int argc, char** argv) { return expdens::cli::run_main(argc, argv); }
