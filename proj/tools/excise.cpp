#include "excision/cli.hpp"

int main(int argc, char** argv)
{
    return excision::cli::run(argc, argv);
}
