#include <charconv>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "ecsim/analysis.hpp"
#include "ecsim/json_io.hpp"

namespace ecsim::analysis {

namespace {

constexpr std::string_view kHeader = "run,time_s,event";

}  // namespace

EventTrace to_trace(const sim::RunRecord& record) {
  EventTrace trace;
  trace.run_id = std::to_string(record.run_index);
  trace.events.reserve(record.events.size());
  for (const auto& e : record.events) {
    trace.events.push_back({e.time, std::string(sim::event_name(e.kind))});
  }
  return trace;
}

std::string write_trace_csv(std::span<const sim::RunRecord> records) {
  std::string out(kHeader);
  out += '\n';
  char buffer[64];
  for (const auto& record : records) {
    const std::string run = std::to_string(record.run_index);
    for (const auto& e : record.events) {
      std::snprintf(buffer, sizeof buffer, "%.17g", e.time);
      out += run;
      out += ',';
      out += buffer;
      out += ',';
      out += sim::event_name(e.kind);
      out += '\n';
    }
  }
  return out;
}

std::vector<EventTrace> parse_trace_csv(std::string_view text, std::string_view origin) {
  std::vector<EventTrace> traces;
  std::unordered_map<std::string, std::size_t> index;
  std::size_t line_no = 0;
  bool header_seen = false;
  auto fail = [&](const std::string& message) -> InputError {
    return InputError(std::string(origin) + ":" + std::to_string(line_no) + ": " + message);
  };

  while (!text.empty()) {
    const auto newline = text.find('\n');
    std::string_view line = text.substr(0, newline);
    text = newline == std::string_view::npos ? std::string_view{} : text.substr(newline + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header_seen) {
      if (line != kHeader) throw fail("expected header '" + std::string(kHeader) + "'");
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;

    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos) {
      throw fail("expected 3 fields");
    }
    const auto run = line.substr(0, c1);
    const auto time_text = line.substr(c1 + 1, c2 - c1 - 1);
    const auto event = line.substr(c2 + 1);
    if (run.empty()) throw fail("empty run id");
    if (event.empty()) throw fail("empty event name");
    double time = 0.0;
    const auto [end, ec] =
        std::from_chars(time_text.data(), time_text.data() + time_text.size(), time);
    if (ec != std::errc{} || end != time_text.data() + time_text.size() ||
        !std::isfinite(time)) {
      throw fail("invalid time '" + std::string(time_text) + "'");
    }

    auto [it, inserted] = index.try_emplace(std::string(run), traces.size());
    if (inserted) traces.push_back({std::string(run), {}});
    auto& events = traces[it->second].events;
    if (!events.empty() && time < events.back().time) {
      throw fail("time decreases within run " + std::string(run));
    }
    events.push_back({time, std::string(event)});
  }
  if (!header_seen) throw InputError(std::string(origin) + ": empty trace file");
  return traces;
}

}  // namespace ecsim::analysis
