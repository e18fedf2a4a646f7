#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "leaklint/span.hpp"

namespace leaklint {

struct Kwarg {
  std::string name;
  Span value;
};

/// One call expression. callee_tail is the last dotted segment of the
/// callee ("fit" for pipe.steps[0].fit(X)); a subscript between segments
/// does not change the tail.
struct CallSite {
  int id = -1;
  int stmt_index = -1;
  std::string callee_tail;
  std::string callee_path;
  std::optional<Span> receiver;  // object of an attribute callee
  int receiver_call = -1;        // call id when the receiver ends in a call
  std::vector<Span> args;
  std::vector<Kwarg> kwargs;
  Span span;       // callee start through the closing paren
  Span args_span;  // region strictly between the parens
};

enum class StmtKind { Assign, Expr, Other };

struct Statement {
  int index = -1;
  StmtKind kind = StmtKind::Other;
  std::vector<std::string> lhs_names;
  std::vector<bool> lhs_partial;  // attribute/subscript target or augmented
  std::vector<Span> lhs_spans;    // base-name token of each target
  std::vector<int> rhs_calls;     // ids of calls parsed within the statement
  Span span;
  std::string indent;
};

/// A name mentioned in expression position. arg_of_call is the id of the
/// innermost call whose parentheses enclose the read, or -1.
struct NameRead {
  std::string name;
  Span span;
  int stmt_index = -1;
  int arg_of_call = -1;
};

struct ProgramModel {
  std::string unit_id;
  std::uint64_t source_hash = 0;
  std::vector<Statement> statements;
  std::vector<CallSite> calls;
  std::vector<NameRead> name_reads;
};

/// Reads whose span lies strictly between the parens of `call`.
inline std::vector<const NameRead*> reads_in_args(const ProgramModel& m,
                                                  const CallSite& call) {
  std::vector<const NameRead*> out;
  for (const auto& r : m.name_reads)
    if (r.stmt_index == call.stmt_index && span_contains(call.args_span, r.span))
      out.push_back(&r);
  return out;
}

inline std::vector<const NameRead*> reads_in_span(const ProgramModel& m,
                                                  int stmt_index,
                                                  const Span& span) {
  std::vector<const NameRead*> out;
  for (const auto& r : m.name_reads)
    if (r.stmt_index == stmt_index && span_contains(span, r.span))
      out.push_back(&r);
  return out;
}

}  // namespace leaklint
