#include "hyperwave/cli/app.hpp"

int main(int argc, char** argv) { return hyperwave::cli::run(argc, argv); }
