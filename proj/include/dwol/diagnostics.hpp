#pragma once

#include <functional>
#include <string>

namespace dwol {

// Non-fatal validity warnings go through a process-wide sink (stderr by default).
using DiagnosticSink = std::function<void(const std::string&)>;

void set_diagnostic_sink(DiagnosticSink sink);
void emit_diagnostic(const std::string& message);

}  // namespace dwol
