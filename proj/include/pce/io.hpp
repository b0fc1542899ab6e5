// Copyright 2026 The pce Authors
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

#include <iosfwd>
#include <string>
#include <vector>

#include "pce/channel.hpp"
#include "pce/estimation.hpp"
#include "pce/stabilizer.hpp"

namespace pce {

// Flat-file formats.
//
// Channel JSON:  {"n": 2, "format": "sparse", "entries": [["XI", 0.1], ...]}
//                {"n": 1, "format": "dense",  "entries": [p_I, p_X, p_Z, p_Y]}
// Covering JSON: {"m": 2, "construction": "mub", "groups": [["XI", "IX"], ...]}
// Estimates CSV: label,lambda_hat,n_shots,stderr
// Decay CSV:     label,m,f_mean,shots
//
// Doubles are written with 17 significant digits so every value reads back
// bit-exact.

/// printf("%.17g"), with nan/inf spelled "nan", "inf", "-inf".
std::string format_double(double x);

std::string channel_to_json(const PauliChannel& channel, bool dense = false);
/// Throws UsageError on malformed documents or invalid channels.
PauliChannel channel_from_json(const std::string& text);

std::string covering_to_json(const Covering& covering);
/// Groups are validated; coverage itself is not (see verify_covering).
Covering covering_from_json(const std::string& text);

/// Each `comments` entry becomes one leading "# ..." line.
void write_estimates_csv(std::ostream& out, const EstimateSet& estimates, const std::vector<std::string>& comments = {});
void write_decay_csv(std::ostream& out, const std::vector<DecaySeries>& series,
                     const std::vector<std::string>& comments = {});

struct EstimateRow {
  PauliLabel label;
  double lambda_hat;
  int64_t n_shots;
  double stderr_value;
};

/// Skips "#" lines and the header.
std::vector<EstimateRow> read_estimates_csv(std::istream& in);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace pce
