#pragma once

#include <map>
#include <string>
#include <vector>

#include "planq/oracle.hpp"
#include "planq/render.hpp"
#include "planq/taskgen.hpp"

namespace planq {

enum class VerifyStatus { confirmed, mismatch, unverifiable };

struct VerifyOutcome {
  VerifyStatus status = VerifyStatus::confirmed;
  std::string note;  // reason for mismatch or unverifiable
};

/// Re-derives the gold answer of one record from the explicit state space:
/// the state must be in the index, the context, question and options must
/// re-render identically from the check payload, and the oracle's answer
/// must match the stored gold.
VerifyOutcome verify_record(const QuestionRecord& r, const GroundTask& task, const Renderer& renderer,
                            const OracleIndex& oracle);

struct VerifyTally {
  std::size_t confirmed = 0, mismatched = 0, unverifiable = 0;
};

struct VerifyReport {
  std::map<std::pair<std::string, std::string>, VerifyTally> by_task;  // (task, qtype)
  std::vector<std::pair<std::string, std::string>> mismatches;         // (id, note)
  std::vector<std::pair<std::string, std::string>> unverifiable;
  VerifyTally total;
  void add(const QuestionRecord& r, const VerifyOutcome& o);
};

}  // namespace planq
