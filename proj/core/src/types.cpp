/* Copyright 2026 The dcgraph Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "dcgraph/types.hpp"

#include <sstream>

namespace dcgraph {

std::string State::to_string() const {
  switch (kind_) {
    case Kind::kInfinite:
      return "inf";
    case Kind::kInteger:
      return std::to_string(int_);
    case Kind::kReal: {
      std::ostringstream os;
      os.precision(17);
      os << real_;
      return os.str();
    }
  }
  return "?";
}

}  // namespace dcgraph
