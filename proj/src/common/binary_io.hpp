/*
 * Copyright 2026 The ddib Authors
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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace ddib::io {

// All numeric payloads are little-endian IEEE-754 binary32.
void write_f32(const std::filesystem::path& path, std::span<const float> values);
std::vector<float> read_f32(const std::filesystem::path& path);
// Convenience overloads that narrow/widen double data at the file boundary.
void write_f32(const std::filesystem::path& path, std::span<const double> values);
std::vector<double> read_f32_as_double(const std::filesystem::path& path);

void append_f32_le(std::string& out, std::span<const float> values);
std::vector<float> decode_f32_le(const char* data, std::size_t count);

std::string read_text(const std::filesystem::path& path);
// Writes through a temporary file and renames, so readers never observe a
// partially written file.
void write_text(const std::filesystem::path& path, const std::string& text);

void ensure_dir(const std::filesystem::path& dir);

}  // namespace ddib::io
