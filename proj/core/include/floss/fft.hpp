// Copyright 2026 The floss Authors
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

#pragma once

#include <complex>
#include <span>
#include <vector>

namespace floss::fft {

// One-sided DFT of a real signal: n/2 + 1 bins, X[k] = sum x[t] e^{-2 pi i k t / n}.
// Thread-safe; plans are cached per length.
std::vector<std::complex<double>> rfft(std::span<const double> x);

// Same, writing |X[k]|^2 into `power` (size n/2 + 1).
void rfft_power(std::span<const double> x, std::span<double> power);

}  // namespace floss::fft
