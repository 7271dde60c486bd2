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

#include "common/binary_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "common/error.hpp"

namespace ddib::io {
namespace {

std::uint32_t to_le(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    return ((v & 0xFFu) << 24) | ((v & 0xFF00u) << 8) | ((v >> 8) & 0xFF00u) | (v >> 24);
  }
}

}  // namespace

void append_f32_le(std::string& out, std::span<const float> values) {
  const std::size_t base = out.size();
  out.resize(base + values.size() * 4);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::uint32_t w = to_le(std::bit_cast<std::uint32_t>(values[i]));
    std::memcpy(out.data() + base + 4 * i, &w, 4);
  }
}

std::vector<float> decode_f32_le(const char* data, std::size_t count) {
  std::vector<float> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t w;
    std::memcpy(&w, data + 4 * i, 4);
    out[i] = std::bit_cast<float>(to_le(w));
  }
  return out;
}

void write_f32(const std::filesystem::path& path, std::span<const float> values) {
  std::string buf;
  append_f32_le(buf, values);
  write_text(path, buf);
}

void write_f32(const std::filesystem::path& path, std::span<const double> values) {
  std::vector<float> narrowed(values.begin(), values.end());
  write_f32(path, std::span<const float>(narrowed));
}

std::vector<float> read_f32(const std::filesystem::path& path) {
  const std::string buf = read_text(path);
  if (buf.size() % 4 != 0)
    fail(ErrorCode::Format, "float32 file size not a multiple of 4: " + path.string());
  return decode_f32_le(buf.data(), buf.size() / 4);
}

std::vector<double> read_f32_as_double(const std::filesystem::path& path) {
  const auto f = read_f32(path);
  return {f.begin(), f.end()};
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) ensure_dir(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot write " + tmp.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) fail(ErrorCode::Io, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorCode::Io, "cannot rename onto " + path.string() + ": " + ec.message());
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create directory " + dir.string() + ": " + ec.message());
}

}  // namespace ddib::io
