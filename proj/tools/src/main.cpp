#include "twotime/cli/app.hpp"

int main(int argc, char** argv) { return twotime::cli::run_app(argc, argv); }
