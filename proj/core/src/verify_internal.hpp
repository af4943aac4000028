#pragma once

// Shared helpers for the acceptance-suite translation units.

#include <cstdarg>
#include <cstdio>
#include <exception>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "dgff/verify.hpp"

namespace dgff::verify_internal {

inline std::string strf(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  char buffer[1024];
  std::vsnprintf(buffer, sizeof buffer, fmt, args);
  va_end(args);
  return std::string(buffer);
}

// Runs one criterion body, turning exceptions into failures, and streams
// the finished line when `live` is set.  The body fills pass/detail.
inline CriterionResult guarded(
    int index, const std::string& name, std::ostream* live,
    const std::function<void(bool* pass, std::string* detail)>& body) {
  CriterionResult result;
  result.index = index;
  result.name = name;
  try {
    body(&result.pass, &result.detail);
  } catch (const std::exception& err) {
    result.pass = false;
    result.detail = std::string("exception: ") + err.what();
  }
  if (live != nullptr) *live << format_criterion_line(result) << std::endl;
  return result;
}

}  // namespace dgff::verify_internal
