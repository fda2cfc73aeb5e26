#pragma once

#include <chrono>
#include <string>

#include <json.hpp>

#include "pureg/fs_util.hpp"

namespace pureg::cli {

// Reproducibility record written next to every command's outputs: the exact
// command line, the effective config, and a content hash per input and
// output file.
class Manifest {
 public:
  Manifest(int argc, char** argv) : start_(std::chrono::steady_clock::now()) {
    std::string cmd;
    for (int i = 0; i < argc; ++i) {
      if (i) cmd += ' ';
      cmd += argv[i];
    }
    j_["format"] = "pu-run-manifest";
    j_["version"] = 1;
    j_["command"] = cmd;
    j_["inputs"] = nlohmann::json::object();
    j_["outputs"] = nlohmann::json::object();
  }

  void set_config(nlohmann::json config) { j_["config"] = std::move(config); }
  void set(const std::string& key, nlohmann::json value) { j_[key] = std::move(value); }

  void add_input(const std::string& path) { j_["inputs"][path] = hash_file_hex(path); }
  void add_output(const std::string& path) { j_["outputs"][path] = hash_file_hex(path); }

  void write(const std::string& path) {
    auto elapsed = std::chrono::steady_clock::now() - start_;
    j_["elapsed_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    atomic_write_file(path, j_.dump(2) + "\n");
  }

 private:
  nlohmann::json j_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace pureg::cli
