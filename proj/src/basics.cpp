#include "ccsp/basics.hpp"
#include "ccsp/diagnostics.hpp"

#include <tuple>

namespace ccsp {

Atom Atom::ident(std::string name) {
    Atom a;
    a.kind_ = Kind::Ident;
    a.text_ = std::move(name);
    return a;
}

Atom Atom::integer(std::int64_t value) {
    Atom a;
    a.kind_ = Kind::Integer;
    a.value_ = value;
    return a;
}

std::string Atom::render() const {
    return kind_ == Kind::Ident ? text_ : std::to_string(value_);
}

bool operator==(const Atom& a, const Atom& b) {
    if (a.kind_ != b.kind_) return false;
    return a.kind_ == Atom::Kind::Ident ? a.text_ == b.text_ : a.value_ == b.value_;
}

bool operator<(const Atom& a, const Atom& b) {
    // Canonical atom order: integers first (numeric), then identifiers.
    if (a.kind_ != b.kind_) return a.kind_ == Atom::Kind::Integer;
    if (a.kind_ == Atom::Kind::Integer) return a.value_ < b.value_;
    return a.text_ < b.text_;
}

std::string Event::render() const {
    std::string out = channel;
    for (const Atom& a : payload) {
        out += '.';
        out += a.render();
    }
    return out;
}

bool operator==(const Event& a, const Event& b) {
    return a.channel == b.channel && a.payload == b.payload;
}

bool operator<(const Event& a, const Event& b) {
    // '.' sorts below every identifier character, so comparing the channel
    // and then the rendered payload atoms matches render()-lexicographic
    // order without building the string.
    if (a.channel != b.channel) {
        // A shorter channel that is a prefix of a longer one renders with a
        // following '.', which is smaller than any identifier character.
        return a.channel < b.channel;
    }
    const std::size_t n = std::min(a.payload.size(), b.payload.size());
    for (std::size_t i = 0; i < n; ++i) {
        const std::string ra = a.payload[i].render();
        const std::string rb = b.payload[i].render();
        if (ra != rb) return ra < rb;
    }
    return a.payload.size() < b.payload.size();
}

const char* terminal_name(Terminal t) {
    switch (t) {
    case Terminal::Throw: return "THROW";
    case Terminal::Yield: return "YIELD";
    case Terminal::Commit: return "COMMIT";
    }
    return "?";
}

const char* terminal_glyph(Terminal t) {
    switch (t) {
    case Terminal::Throw: return "!";
    case Terminal::Yield: return "?";
    case Terminal::Commit: return "✓";
    }
    return "?";
}

bool operator==(const SyncSet& a, const SyncSet& b) {
    return a.channels == b.channels;
}

std::string CompletedTrace::render() const {
    std::string out = "⟨";
    bool first = true;
    for (const Event& e : events) {
        if (!first) out += ',';
        first = false;
        out += e.render();
    }
    out += "⟩";
    out += terminal_glyph(terminal);
    return out;
}

bool operator==(const CompletedTrace& a, const CompletedTrace& b) {
    return a.terminal == b.terminal && a.events == b.events;
}

bool operator<(const CompletedTrace& a, const CompletedTrace& b) {
    const std::size_t n = std::min(a.events.size(), b.events.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a.events[i] < b.events[i]) return true;
        if (b.events[i] < a.events[i]) return false;
    }
    if (a.events.size() != b.events.size()) return a.events.size() < b.events.size();
    return static_cast<int>(a.terminal) < static_cast<int>(b.terminal);
}

std::string TracePair::render() const {
    return "(" + forward.render() + ", " + compensation.render() + ")";
}

bool operator==(const TracePair& a, const TracePair& b) {
    return a.forward == b.forward && a.compensation == b.compensation;
}

bool operator<(const TracePair& a, const TracePair& b) {
    if (a.forward < b.forward) return true;
    if (b.forward < a.forward) return false;
    return a.compensation < b.compensation;
}

bool operator==(const TraceSet& a, const TraceSet& b) {
    return a.exhaustive == b.exhaustive && a.traces == b.traces;
}

bool operator==(const TracePairSet& a, const TracePairSet& b) {
    return a.exhaustive == b.exhaustive && a.pairs == b.pairs;
}

CompletedTrace make_trace(std::vector<Event> events, Terminal t) {
    return CompletedTrace{std::move(events), t};
}

Event make_event(std::string channel, std::vector<Atom> payload) {
    return Event{std::move(channel), std::move(payload)};
}

std::string Diagnostic::render() const {
    std::string out = severity == Severity::Error ? "error" : "warning";
    if (line > 0) out += " at " + std::to_string(line) + ":" + std::to_string(column);
    out += ": " + message;
    return out;
}

std::string render_diagnostics(const std::vector<Diagnostic>& diags) {
    std::string out;
    for (const Diagnostic& d : diags) {
        out += d.render();
        out += '\n';
    }
    return out;
}

} // namespace ccsp
