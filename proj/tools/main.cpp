#include "app.hpp"

int main(int argc, char** argv) { return hmfsvm::cli::run(argc, argv); }
