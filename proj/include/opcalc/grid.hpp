/*
   Copyright 2026 The opcalc authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef OPCALC_GRID_HPP
#define OPCALC_GRID_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace opcalc {

/// Uniform grid starting at t = 0.
struct Grid {
    double dt = 0.0;
    std::size_t count = 0;  // number of samples, >= 2

    double width() const { return dt * static_cast<double>(count - 1); }
    double time_at(std::size_t i) const { return dt * static_cast<double>(i); }

    /// Grid of nbar steps (nbar + 1 samples) spanning [0, width].
    static Grid over(double width, std::size_t nbar);
};

struct SampledSignal {
    Grid grid;
    std::vector<double> values;

    double mean_square() const;
};

/// CSV with a comment preamble (# lines), a header row, and
/// 17-significant-digit floats, so files round-trip losslessly.
void write_signal_csv(const std::string& path, const SampledSignal& sig,
                      const std::vector<std::string>& preamble = {});
void write_table_csv(const std::string& path, const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows,
                     const std::vector<std::string>& preamble = {});
SampledSignal read_signal_csv(const std::string& path);

/// write-temp-then-rename text write
void atomic_write_text(const std::string& path, const std::string& content);

}  // namespace opcalc

#endif
