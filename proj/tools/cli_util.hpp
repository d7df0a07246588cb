/*
 * Copyright 2026 rgbt-toolkit authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef RGBT_TOOLS_CLI_UTIL_HPP
#define RGBT_TOOLS_CLI_UTIL_HPP

#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "rgbt/rgbt.h"

namespace cli {

// Exit codes: 0 ok, 1 validation error, 2 runtime error, 64 usage.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RuntimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raises the proper CLI error class for a failed C API call.
inline void check(rgbt_status status, const std::string& context) {
  if (status == RGBT_OK) return;
  const std::string msg = context + ": " + rgbt_last_error_message();
  switch (status) {
    case RGBT_ERROR_INVALID_ARGUMENT:
    case RGBT_ERROR_PARSE:
    case RGBT_ERROR_DOMAIN:
    case RGBT_ERROR_UNSUPPORTED:
      throw ValidationError(msg);
    default:
      throw RuntimeError(msg);
  }
}

inline void require_input(const std::string& path) {
  if (!std::filesystem::exists(path))
    throw ValidationError("input path does not exist: " + path);
}

inline void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw RuntimeError("cannot create output directory " + dir + ": " + ec.message());
}

// Shortest round-trip decimal form, stable across runs.
inline std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, end);
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeError("cannot open for writing: " + path);
  out << text;
  if (!out) throw RuntimeError("short write: " + path);
}

inline void write_json_file(const std::string& path, const nlohmann::json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
}

// One JSON summary line per command on stdout.
class Summary {
 public:
  explicit Summary(const std::string& command)
      : start_(std::chrono::steady_clock::now()) {
    int32_t manifest = 0, embedding = 0, summary = 0;
    rgbt_schema_versions(&manifest, &embedding, &summary);
    doc_["command"] = command;
    doc_["version"] = rgbt_version();
    doc_["schema"] = summary;
    doc_["outputs"] = nlohmann::json::array();
    doc_["warnings"] = nlohmann::json::array();
  }

  void add_output(const std::string& path) { doc_["outputs"].push_back(path); }
  void add_warning(const std::string& text) { doc_["warnings"].push_back(text); }
  void set_config(nlohmann::json config) { doc_["config"] = std::move(config); }
  nlohmann::json& extra() { return doc_; }

  void print() {
    const auto elapsed = std::chrono::steady_clock::now() - start_;
    doc_["elapsed_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    std::cout << doc_.dump() << "\n";
  }

 private:
  nlohmann::json doc_;
  std::chrono::steady_clock::time_point start_;
};

// Default worker count: --jobs flag > RGBT_JOBS > logical cores.
inline int default_jobs() {
  if (const char* env = std::getenv("RGBT_JOBS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs tasks over a bounded pool; results land at their input index, so the
// output ordering is independent of scheduling.
inline void parallel_for(std::size_t count, int jobs,
                         const std::function<void(std::size_t)>& task) {
  if (count == 0) return;
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(count)));
  if (n == 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  for (int w = 0; w < n; ++w) {
    workers.emplace_back([&, w] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          task(i);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
          failed.store(true);
          return;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Sorted regular files under a directory matching any of the extensions, or
// the path itself when it is a file.
inline std::vector<std::string> collect_inputs(const std::string& path,
                                               const std::vector<std::string>& extensions) {
  require_input(path);
  std::vector<std::string> files;
  if (std::filesystem::is_directory(path)) {
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      if (!entry.is_regular_file()) continue;
      const std::string ext = entry.path().extension().string();
      for (const auto& want : extensions) {
        if (ext == want) {
          files.push_back(entry.path().string());
          break;
        }
      }
    }
    std::sort(files.begin(), files.end());
    if (files.empty())
      throw ValidationError("no matching input files under " + path);
  } else {
    files.push_back(path);
  }
  return files;
}

inline double parse_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("cannot parse " + what + ": '" + text + "'");
  }
}

inline std::size_t parse_size(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("cannot parse " + what + ": '" + text + "'");
  }
}

inline std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> parts;
  std::string part;
  for (char c : text) {
    if (c == ',') {
      if (!part.empty()) parts.push_back(part);
      part.clear();
    } else {
      part.push_back(c);
    }
  }
  if (!part.empty()) parts.push_back(part);
  return parts;
}

}  // namespace cli

#endif
