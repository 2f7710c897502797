// Copyright 2026 The xplat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef XPLAT_ERRORS_H
#define XPLAT_ERRORS_H

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace xplat {

/// Raised when a simulation request exceeds a configured qubit cap.
class CapacityError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A quantity is mathematically undefined for the given inputs (e.g. a fidelity
/// normalized by a non-positive purity estimate).
class UndefinedValueError : public std::domain_error {
   public:
    UndefinedValueError(const std::string &what, double purity_i, double purity_j)
        : std::domain_error(what), purity_i(purity_i), purity_j(purity_j) {
    }
    double purity_i;
    double purity_j;
};

/// Input data violates a documented invariant. `record_index` names the
/// offending record when the violation is local to one.
class InvariantError : public std::runtime_error {
   public:
    explicit InvariantError(const std::string &what, std::optional<size_t> record_index = std::nullopt)
        : std::runtime_error(what), record_index(record_index) {
    }
    std::optional<size_t> record_index;
};

class ParseError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace xplat

#endif
