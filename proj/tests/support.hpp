#pragma once

#include <cmath>
#include <functional>
#include <optional>

#include "doctest.h"
#include "maxcorr/error.hpp"

// Kind of the maxcorr::Error raised by f, or nullopt if f returns normally.
inline std::optional<maxcorr::ErrorKind> error_kind(const std::function<void()>& f) {
  try {
    f();
  } catch (const maxcorr::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

#define CHECK_ERROR(expr, KIND) CHECK(error_kind([&] { (void)(expr); }) == maxcorr::ErrorKind::KIND)
