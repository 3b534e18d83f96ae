#pragma once

#include <cstddef>
#include <string>

namespace relcomp {

// What to do with evaluation items that contain out-of-vocabulary tokens.
// CountIncorrect keeps accuracy comparable across operators over the fixed
// item set; Skip scores only answerable items. Coverage is reported either
// way.
enum class OovPolicy { CountIncorrect, Skip };

const std::string& oov_policy_name(OovPolicy policy);
OovPolicy parse_oov_policy(const std::string& name);

struct EvalOptions {
  // l2-normalize word vectors before composition (relation vectors are never
  // re-normalized).
  bool normalize_inputs = true;
  OovPolicy oov_policy = OovPolicy::CountIncorrect;
  std::size_t workers = 1;
};

}  // namespace relcomp
