#pragma once

#include <string>
#include <vector>

#include "wm/model.hpp"

namespace wm {

/* Built-in example models used by the test suite and the docs. The same text
 * is shipped as fixtures/<name>.wm for use with the CLI. Names ending in _p
 * carry edge probabilities. */
const std::vector<std::string>& fixture_names();
const std::string& fixture_text(const std::string& name); /* throws Error */
WeakModel fixture(const std::string& name);

}  // namespace wm
