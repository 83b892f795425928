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

#include "floss/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

namespace floss::fft {
namespace {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

// Plan for one length, created with FFTW_UNALIGNED so it can run on any
// buffer through the new-array execute interface.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan plan_for(int n) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    std::unique_ptr<double, FftwFree> in(fftw_alloc_real(static_cast<std::size_t>(n)));
    std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1)));
    fftw_plan p = fftw_plan_dft_r2c_1d(n, in.get(), out.get(),
                                       FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_PRESERVE_INPUT);
    plans_.emplace(n, p);
    return p;
  }

  ~PlanCache() {
    for (auto& [n, p] : plans_) fftw_destroy_plan(p);
  }

 private:
  std::mutex mu_;
  std::map<int, fftw_plan> plans_;
};

void execute(std::span<const double> x, std::vector<std::complex<double>>& out) {
  const int n = static_cast<int>(x.size());
  out.resize(x.size() / 2 + 1);
  if (x.empty()) return;
  fftw_plan p = PlanCache::instance().plan_for(n);
  // PRESERVE_INPUT makes the const_cast safe.
  fftw_execute_dft_r2c(p, const_cast<double*>(x.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace

std::vector<std::complex<double>> rfft(std::span<const double> x) {
  std::vector<std::complex<double>> out;
  execute(x, out);
  return out;
}

void rfft_power(std::span<const double> x, std::span<double> power) {
  thread_local std::vector<std::complex<double>> buf;
  execute(x, buf);
  const std::size_t m = std::min(buf.size(), power.size());
  for (std::size_t k = 0; k < m; ++k) power[k] = std::norm(buf[k]);
}

}  // namespace floss::fft
