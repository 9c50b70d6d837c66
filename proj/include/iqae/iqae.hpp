// Copyright 2026 The IQAE Authors
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


#pragma once

#include "iqae/backends.hpp"
#include "iqae/eigensolver.hpp"
#include "iqae/error.hpp"
#include "iqae/grouping.hpp"
#include "iqae/moment_basis.hpp"
#include "iqae/models.hpp"
#include "iqae/oracles.hpp"
#include "iqae/overlap.hpp"
#include "iqae/pauli.hpp"
#include "iqae/rng.hpp"
