#pragma once

#include <string>
#include <utility>
#include <vector>

namespace sl2 {

enum class Verdict { Confirmed, Refuted, Inapplicable, Skipped };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Confirmed: return "Confirmed";
    case Verdict::Refuted: return "Refuted";
    case Verdict::Inapplicable: return "Inapplicable";
    case Verdict::Skipped: return "Skipped";
  }
  return "?";
}

// Per-claim, per-scope verdict.  Refuted always carries a replayable
// counterexample as (label, serialized value) pairs.
struct ClaimStatus {
  std::string claim_id;
  std::string scope;
  Verdict verdict = Verdict::Skipped;
  std::string statement;  // what was checked, in mathematical terms
  std::string detail;
  std::vector<std::pair<std::string, std::string>> counterexample;
};

}  // namespace sl2
