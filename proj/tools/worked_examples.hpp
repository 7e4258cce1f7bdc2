#pragma once

#include <functional>
#include <string>
#include <vector>

#include "modtrace/drinfeld.hpp"
#include "modtrace/elltrace.hpp"

struct WorkedExample {
  std::string name;
  std::string expected;
  std::function<std::string(const modtrace::EnumOptions&)> run;
};

std::vector<WorkedExample> worked_examples();

// first s coefficients of Tr / (-wp)^{ceil(k/2)} in pi = 1/T
std::vector<modtrace::FqField::Elem> infty_digits(const modtrace::DrinfeldParams& P,
                                                  const modtrace::FqPoly& tr, unsigned k, unsigned s);
