#include <iostream>

#include "lpma/acceptance.hpp"

int main() { return lpma::run_acceptance_suite(std::cout) == 0 ? 0 : 2; }
