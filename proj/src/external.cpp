/**
 * Copyright 2026 The segaug Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstring>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>
#include <vector>

#include "segaug/error.hpp"
#include "segaug/evaluator.hpp"
#include "segaug/serialize.hpp"

extern char** environ;

namespace fs = std::filesystem;

namespace segaug {
namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

std::string read_tail(const fs::path& path, std::size_t max_bytes = 4096) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  if (text.size() > max_bytes) text = "..." + text.substr(text.size() - max_bytes);
  return text;
}

class ScratchDir {
 public:
  ScratchDir(const fs::path& parent, bool keep) : keep_(keep) {
    const fs::path base = parent.empty() ? fs::temp_directory_path() : parent;
    fs::create_directories(base);
    std::string pattern = (base / "segaug-trial-XXXXXX").string();
    std::vector<char> buf(pattern.begin(), pattern.end());
    buf.push_back('\0');
    if (!::mkdtemp(buf.data())) throw EvaluatorError("cannot create scratch directory under " + base.string());
    path_ = buf.data();
  }
  ~ScratchDir() {
    if (!keep_) {
      std::error_code ec;
      fs::remove_all(path_, ec);
    }
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;
  const fs::path& path() const noexcept { return path_; }

 private:
  fs::path path_;
  bool keep_;
};

}  // namespace

ExternalEvaluator::ExternalEvaluator(ExternalSpec spec) : spec_(std::move(spec)) {
  if (spec_.command.empty()) throw ConfigError("external evaluator command is empty");
}

double evaluate_external(const StrategyConfig& cfg, std::uint64_t seed, const ExternalSpec& spec) {
  if (spec.command.empty()) throw ConfigError("external evaluator command is empty");
  ScratchDir scratch(spec.work_root, spec.keep_files);
  const fs::path input = scratch.path() / "input.json";
  const fs::path output = scratch.path() / "result.json";
  const fs::path log = scratch.path() / "output.log";
  {
    std::ofstream out(input);
    out << Json{{"config", to_json(cfg)}, {"seed", seed}, {"out", output.string()}}.dump() << '\n';
    if (!out) throw EvaluatorError("cannot write " + input.string());
  }

  const std::string command_line = spec.command + " " + shell_quote(input.string());
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  posix_spawn_file_actions_adddup2(&actions, STDOUT_FILENO, STDERR_FILENO);
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);

  std::string sh = "/bin/sh";
  std::string dash_c = "-c";
  std::vector<char*> argv{sh.data(), dash_c.data(), const_cast<char*>(command_line.c_str()), nullptr};
  pid_t pid = 0;
  const int rc = posix_spawn(&pid, "/bin/sh", &actions, &attr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  if (rc != 0) throw EvaluatorError("cannot start external evaluator: " + std::string(std::strerror(rc)));

  const auto deadline = std::chrono::steady_clock::now() + spec.timeout;
  int status = 0;
  auto delay = std::chrono::milliseconds(1);
  for (;;) {
    const pid_t done = ::waitpid(pid, &status, WNOHANG);
    if (done == pid) break;
    if (done < 0) throw EvaluatorError("waitpid failed for external evaluator");
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(-pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      throw EvaluatorError("external evaluator timed out after " + std::to_string(spec.timeout.count()) + " ms",
                           read_tail(log));
    }
    std::this_thread::sleep_for(delay);
    delay = std::min(delay * 2, std::chrono::milliseconds(50));
  }

  if (WIFSIGNALED(status)) {
    throw EvaluatorError("external evaluator killed by signal " + std::to_string(WTERMSIG(status)), read_tail(log));
  }
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw EvaluatorError("external evaluator exited with status " + std::to_string(WEXITSTATUS(status)),
                         read_tail(log));
  }

  std::ifstream in(output);
  if (!in) throw EvaluatorError("external evaluator wrote no result file " + output.string(), read_tail(log));
  Json result;
  try {
    result = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw EvaluatorError(std::string("malformed result file: ") + e.what(), read_tail(log));
  }
  if (!result.is_object() || !result.contains("miou") || !result.at("miou").is_number()) {
    throw EvaluatorError("malformed result file: expected {\"miou\": <real>}", result.dump());
  }
  const double miou = result.at("miou").get<double>();
  if (!std::isfinite(miou) || miou < 0.0 || miou > 1.0) {
    throw EvaluatorError("malformed result file: miou " + result.at("miou").dump() + " outside [0, 1]");
  }
  return miou;
}

}  // namespace segaug
