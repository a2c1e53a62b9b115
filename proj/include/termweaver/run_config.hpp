#pragma once

#include <cstdint>
#include <string>

namespace termweaver {

// Shared CLI configuration, loadable from a TOML-style key = value file.
// Flags override config values; the API key comes only from the environment.
struct RunConfig {
  std::string endpoint_url;
  std::string model_name;
  double temperature = 0.1;
  int concurrency = 4;
  int max_retries = 3;
  int timeout_ms = 30000;
  std::string template_path;          // translation prompt template
  std::string extract_template_path;  // extraction prompt template
  std::string glossary_path;
  std::uint64_t seed = 0;
  std::size_t entry_cap = 50;

  void validate() const;
};

RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& content);

}  // namespace termweaver
