#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace tractorlab::cli {

enum Exit { kPass = 0, kCheckFailure = 1, kUsage = 2 };

struct Common {
  std::string format = "json";
  std::optional<std::string> out;
  std::uint64_t seed = 1;
  bool timings = false;
};

int cmd_verify(const Common& c, int n, const std::string& suite);
int cmd_ckt_basis(const Common& c, int n, int rank, std::optional<int> degree);
int cmd_prolong(const Common& c, const std::string& input, const std::string& level,
                const std::optional<std::string>& sigma);
int cmd_check_scale(const Common& c, const std::string& input, const std::string& sigma, const std::string& mode);
int cmd_einstein_dim(const Common& c, int n, const std::string& sigma);
int cmd_new_killing(const Common& c, const std::string& input, const std::string& sigma, std::optional<int> rank);

}  // namespace tractorlab::cli
