/*
 * Copyright 2026 The covtomo Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <covtomo/json_io.hpp>

#include <string>

namespace covtomo::cli {

/// Inline JSON (starting with '{' or '[') or a path to a JSON file.
Json load_json(const std::string& arg);
/// Writes pretty JSON with a trailing newline to path, or stdout when empty.
void emit(const Json& j, const std::string& path);

StarDomain default_domain(int dim);

/// Runs one named example (or "all"); returns true when every golden value matches.
bool run_examples(const std::string& name, const std::string& out_dir);

/// Flattens a result JSON into CSV.
void plotdata(const Json& result, std::ostream& out);

} // namespace covtomo::cli
