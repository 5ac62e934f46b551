#ifndef CCSP_BASICS_HPP
#define CCSP_BASICS_HPP

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace ccsp {

// An atomic payload value: an identifier such as `m1` or a decimal integer.
class Atom {
public:
    static Atom ident(std::string name);
    static Atom integer(std::int64_t value);

    bool is_int() const { return kind_ == Kind::Integer; }
    bool is_ident() const { return kind_ == Kind::Ident; }
    const std::string& name() const { return text_; }
    std::int64_t value() const { return value_; }

    // Textual form: identifier text, or the decimal digits.
    std::string render() const;

    friend bool operator==(const Atom& a, const Atom& b);
    friend bool operator<(const Atom& a, const Atom& b);

private:
    enum class Kind { Ident, Integer };
    Kind kind_ = Kind::Ident;
    std::string text_;
    std::int64_t value_ = 0;
};

// A communication `channel.v1.v2...`; a payload-free event is just the
// channel name. Equality is channel plus full payload.
struct Event {
    std::string channel;
    std::vector<Atom> payload;

    std::string render() const;
};

bool operator==(const Event& a, const Event& b);
// Orders identically to lexicographic comparison of render() strings
// (channel and payload atoms never contain '.').
bool operator<(const Event& a, const Event& b);

// How a completed trace ends. Join order: THROW < YIELD < COMMIT.
enum class Terminal { Throw = 0, Yield = 1, Commit = 2 };

Terminal join_terminals(Terminal a, Terminal b);
const char* terminal_name(Terminal t);     // "THROW" / "YIELD" / "COMMIT"
const char* terminal_glyph(Terminal t);    // "!" / "?" / "✓"

// The set of channels two parallel processes engage in simultaneously.
struct SyncSet {
    std::set<std::string> channels;

    bool contains(const std::string& channel) const {
        return channels.count(channel) != 0;
    }
    bool empty() const { return channels.empty(); }
};

bool operator==(const SyncSet& a, const SyncSet& b);

struct CompletedTrace {
    std::vector<Event> events;
    Terminal terminal = Terminal::Commit;

    std::string render() const;  // e.g. ⟨Order.m1,Quote.q1⟩✓
};

bool operator==(const CompletedTrace& a, const CompletedTrace& b);
bool operator<(const CompletedTrace& a, const CompletedTrace& b);

// Denotation element of a compensable process: the forward run paired with
// the compensation that would undo it.
struct TracePair {
    CompletedTrace forward;
    CompletedTrace compensation;

    std::string render() const;
};

bool operator==(const TracePair& a, const TracePair& b);
bool operator<(const TracePair& a, const TracePair& b);

// Enumeration caps. Enumeration is exact when it finishes inside the
// bounds; otherwise results are flagged non-exhaustive.
struct Bounds {
    std::size_t max_events = 24;
    std::size_t max_traces = 100000;
};

// A canonically ordered trace set plus the exhaustiveness flag.
struct TraceSet {
    std::set<CompletedTrace> traces;
    bool exhaustive = true;
};

bool operator==(const TraceSet& a, const TraceSet& b);

struct TracePairSet {
    std::set<TracePair> pairs;
    bool exhaustive = true;
};

bool operator==(const TracePairSet& a, const TracePairSet& b);

// Convenience constructors used all over the tests.
CompletedTrace make_trace(std::vector<Event> events, Terminal t);
Event make_event(std::string channel, std::vector<Atom> payload = {});

} // namespace ccsp

#endif
