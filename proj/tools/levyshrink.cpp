#include "levyshrink/cli.hpp"

int main(int argc, char** argv) { return levyshrink::cli::dispatch(argc, argv); }
