// Copyright 2026 The qreset Authors
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

#ifndef QRESET_QRESET_HPP
#define QRESET_QRESET_HPP

#include "qreset/distributions.hpp"
#include "qreset/equilibrium.hpp"
#include "qreset/errors.hpp"
#include "qreset/montecarlo.hpp"
#include "qreset/observables.hpp"
#include "qreset/parallel.hpp"
#include "qreset/qubit.hpp"
#include "qreset/random.hpp"
#include "qreset/renewal.hpp"
#include "qreset/special_functions.hpp"
#include "qreset/spectral.hpp"

#endif  // QRESET_QRESET_HPP
