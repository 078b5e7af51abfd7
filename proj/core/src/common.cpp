#include "lraaa/common.hpp"

#include <sstream>

namespace lraaa {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kDuplicateNodes: return "duplicate-nodes";
    case ErrorCode::kPole: return "pole";
    case ErrorCode::kMemoryBudget: return "memory-budget";
    case ErrorCode::kSolverFailure: return "solver-failure";
    case ErrorCode::kRankDeficient: return "rank-deficient";
    case ErrorCode::kMalformedDocument: return "malformed-document";
    case ErrorCode::kShapeMismatch: return "shape-mismatch";
    case ErrorCode::kDuplicatePoint: return "duplicate-point";
    case ErrorCode::kUnsupportedVariant: return "unsupported-variant";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

namespace {
std::string budget_message(double requested, double budget) {
  std::ostringstream os;
  os << "dense Loewner matrix needs " << requested << " entries, budget is " << budget
     << "; use the low-rank algorithm (lr-paaa) for this grid";
  return os.str();
}
}  // namespace

MemoryBudgetError::MemoryBudgetError(double requested, double budget)
    : Error(ErrorCode::kMemoryBudget, budget_message(requested, budget)),
      requested_(requested),
      budget_(budget) {}

std::size_t shape_product(const Shape& shape) {
  std::size_t n = 1;
  for (auto e : shape) n *= e;
  return n;
}

}  // namespace lraaa
