#pragma once

#include <stdexcept>
#include <string>

namespace hpwe {

// A runtime check on a proven invariant tripped. The CLI maps it to exit 1.
class AssertionFailure : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw AssertionFailure(what);
}

}  // namespace hpwe
