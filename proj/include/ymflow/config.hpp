#pragma once

#include <map>
#include <string>
#include <vector>

#include "ymflow/diagnostics.hpp"
#include "ymflow/flow.hpp"

namespace ymflow {

// Sectioned key = value file. Keys are stored as "section.key" (keys before
// any section header keep their bare name); '#' and ';' start comments;
// whitespace around tokens is trimmed. Duplicate keys are an error so configs
// stay unambiguous when echoed into the run manifest.
struct ConfigFile {
  std::map<std::string, std::string> kv;
  std::string text;  // verbatim source for the manifest echo

  bool has(const std::string& key) const { return kv.count(key) != 0; }
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_num(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
};

ConfigFile parse_config_text(const std::string& text);
ConfigFile parse_config_file(const std::string& path);

// [flow] section -> FlowConfig. Unknown keys in the section and malformed
// values raise ConfigParseError; range validation is FlowConfig::validate().
FlowConfig flow_config_from(const ConfigFile& cf);

// [initial] section: initial-data description.
struct InitialSpec {
  std::string kind = "random_smooth";
  double amplitude = 0.5;
  int kmax = 2;
  double noise = 0.0;  // white-noise admixture for kind = noisy_smooth
};

InitialSpec initial_spec_from(const ConfigFile& cf);

Cochain make_initial(const CubeMesh& mesh, const FlowConfig& cfg, const InitialSpec& spec);

// [wilson] section: evaluation times plus loop lines of the form
//   loopN = plane i j k a b
struct WilsonSpec {
  std::vector<double> times{0.0};
  std::vector<LoopSpec> loops;
};

WilsonSpec wilson_spec_from(const ConfigFile& cf);

}  // namespace ymflow
