#pragma once

// One-command reproduction of each renewal, limit-theorem and remark check
// at desk scale. Every tolerance and sample size is fixed here so published
// numbers can be regenerated from the parameters alone.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace birkhoff {

struct CheckLine {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyResult {
  std::string check;
  std::vector<CheckLine> lines;
  std::vector<std::pair<std::string, std::string>> parameters;

  bool passed() const;
};

struct VerifyOptions {
  std::uint64_t seed = 20181105;
  int workers = 4;
};

/// Names accepted by run_verification, in canonical order.
const std::vector<std::string>& verification_names();

/// Throws InvalidArgument for an unknown name.
VerifyResult run_verification(const std::string& name, const VerifyOptions& options = {});

VerifyResult verify_distrib_h(const VerifyOptions& options = {});
VerifyResult verify_limit_distrib_h(const VerifyOptions& options = {});
VerifyResult verify_nagaev(const VerifyOptions& options = {});
VerifyResult verify_theorem(const VerifyOptions& options = {});
VerifyResult verify_degenerate(const VerifyOptions& options = {});
VerifyResult verify_decorated(const VerifyOptions& options = {});
VerifyResult verify_parity(const VerifyOptions& options = {});
VerifyResult verify_clt(const VerifyOptions& options = {});

}  // namespace birkhoff
