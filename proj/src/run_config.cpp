#include "termweaver/run_config.hpp"

#include <fstream>
#include <sstream>

#include "termweaver/errors.hpp"
#include "termweaver/unicode.hpp"

namespace termweaver {

void RunConfig::validate() const {
  if (temperature < 0.0 || temperature > 2.0)
    throw ValidationError("temperature must be in [0, 2]");
  if (concurrency < 1) throw ValidationError("concurrency must be >= 1");
  if (max_retries < 0) throw ValidationError("max_retries must be >= 0");
  if (timeout_ms <= 0) throw ValidationError("timeout_ms must be positive");
  if (entry_cap < 1) throw ValidationError("entry_cap must be >= 1");
}

namespace {

std::string unquote(std::string v) {
  if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') ||
                        (v.front() == '\'' && v.back() == '\'')))
    return v.substr(1, v.size() - 2);
  return v;
}

}  // namespace

RunConfig parse_run_config(const std::string& content) {
  RunConfig cfg;
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = unicode::trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos) throw FormatError("expected key = value", line_no);
    const std::string key = unicode::trim(t.substr(0, eq));
    const std::string value = unquote(unicode::trim(t.substr(eq + 1)));
    try {
      if (key == "endpoint_url") cfg.endpoint_url = value;
      else if (key == "model_name" || key == "model") cfg.model_name = value;
      else if (key == "temperature") cfg.temperature = std::stod(value);
      else if (key == "concurrency") cfg.concurrency = std::stoi(value);
      else if (key == "max_retries") cfg.max_retries = std::stoi(value);
      else if (key == "timeout_ms") cfg.timeout_ms = std::stoi(value);
      else if (key == "template") cfg.template_path = value;
      else if (key == "extract_template") cfg.extract_template_path = value;
      else if (key == "glossary") cfg.glossary_path = value;
      else if (key == "seed") cfg.seed = std::stoull(value);
      else if (key == "entry_cap") cfg.entry_cap = std::stoul(value);
      else throw FormatError("unknown config key '" + key + "'", line_no);
    } catch (const std::invalid_argument&) {
      throw FormatError("bad value for '" + key + "'", line_no);
    } catch (const std::out_of_range&) {
      throw FormatError("value out of range for '" + key + "'", line_no);
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

}  // namespace termweaver
