#pragma once

#include <string>
#include <vector>

#include "doctest.h"
#include "support.hpp"

namespace testing {

using namespace qstack;
using namespace support;

inline FinMap tab(std::size_t n, std::size_t m, std::vector<Index> t) {
  return FinMap(FinSet::range(n), FinSet::range(m), std::move(t));
}

template <class Fn>
ErrorKind error_kind(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::InvalidInput;
}

template <class T>
Violation violation_of(const Outcome<T>& o) {
  REQUIRE_FALSE(o.ok());
  return o.violation();
}

inline FinMap endo(const FinSet& s, std::vector<Index> t) { return FinMap(s, s, std::move(t)); }

inline FinGroup z(std::size_t n) { return cyclic_group(n); }

// Z/2 acting on {0,1} by swapping.
inline GAction swap_action() { return regular_action(cyclic_group(2)); }

}  // namespace testing
