#pragma once

#include <string>
#include <vector>

#include "dioc/ast.hpp"

namespace dioc {

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  SrcSpan span;
  std::string message;
  std::string code;  // PARSE, SEQ-CONN, PAR-CONN, ...

  std::string display() const;
};

struct ParseResult {
  DiocPtr program;  // null on failure
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return program != nullptr; }
};

/// Parse a DIOC program. Unannotated; run annotate() before projection.
ParseResult parse_dioc(const std::string& text);

/// Parse an update body (same grammar). Rejects occurrences of 0.
ParseResult parse_update(const std::string& text);

/// Parseable rendering; parse_dioc(pretty_dioc(p)) is structurally equal to p
/// modulo annotation.
std::string pretty_dioc(const DiocPtr& p, int indent = 0);

}  // namespace dioc
