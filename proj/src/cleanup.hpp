// Copyright 2026 The revassign Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef REVASSIGN_SRC_CLEANUP_HPP_
#define REVASSIGN_SRC_CLEANUP_HPP_

#include "revassign/model.hpp"

namespace revassign::detail {

// Removes solver noise from a fractional assignment: entries within
// kIntegralityTolerance of 0 or 1 become exact, and column sums, nearly
// integral row sums and (with a partition) nearly integral subset loads are
// made integral by small redistributions over the fractional entries.
Matrix<double> clean_fractional(const FractionalAssignment& fractional,
                                const ProblemInstance& instance,
                                const ReviewerPartition* partition);

}  // namespace revassign::detail

#endif  // REVASSIGN_SRC_CLEANUP_HPP_
