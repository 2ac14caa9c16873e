#include "irratlab/cli.hpp"

int main(int argc, char** argv) { return irratlab::cli::dispatch(argc, argv); }
