#include "relcomp/eval_common.hpp"

#include "relcomp/errors.hpp"

namespace relcomp {

const std::string& oov_policy_name(OovPolicy policy) {
  static const std::string names[] = {"count-incorrect", "skip"};
  return names[static_cast<int>(policy)];
}

OovPolicy parse_oov_policy(const std::string& name) {
  if (name == "count-incorrect") return OovPolicy::CountIncorrect;
  if (name == "skip") return OovPolicy::Skip;
  throw ConfigError("unknown oov policy '" + name +
                    "' (expected count-incorrect or skip)");
}

}  // namespace relcomp
