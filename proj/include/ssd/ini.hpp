#pragma once

// Minimal INI reader/writer shared by the experiment, environment and trace
// file formats: `[section]` headers, `key = value` lines, `#`/`;` full-line
// comments. Key order is preserved so serialization is stable.

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ssd {

struct IniEntry {
    std::string key;
    std::string value;
    int line = 0;
};

struct IniSection {
    std::string name;
    std::vector<IniEntry> entries;
    int line = 0;

    const IniEntry* find(std::string_view key) const;
    void set(std::string key, std::string value);
};

class IniDocument {
public:
    static IniDocument parse(std::string_view text);

    std::string serialize() const;

    const IniSection* find(std::string_view name) const;
    IniSection& section(std::string_view name);
    const std::vector<IniSection>& sections() const { return sections_; }

private:
    std::vector<IniSection> sections_;
};

// Typed access to one section; remembers which keys were read so that
// `finish()` can reject typos instead of silently ignoring them.
class SectionReader {
public:
    SectionReader(const IniSection* section, std::string context);

    bool has(std::string_view key) const;
    std::optional<std::string> text(std::string_view key);
    std::string text(std::string_view key, std::string fallback);
    double number(std::string_view key, double fallback);
    long long integer(std::string_view key, long long fallback);
    bool boolean(std::string_view key, bool fallback);
    std::vector<double> numbers(std::string_view key, std::vector<double> fallback);
    std::vector<long long> integers(std::string_view key, std::vector<long long> fallback);

    // Keys starting with `prefix` that have not been consumed yet.
    std::vector<IniEntry> take_prefixed(std::string_view prefix);

    void finish() const;

private:
    const IniEntry* lookup(std::string_view key);
    [[noreturn]] void fail(const IniEntry& entry, const std::string& what) const;

    const IniSection* section_;
    std::string context_;
    std::set<std::string, std::less<>> used_;
};

std::string trim(std::string_view text);
std::vector<std::string> split(std::string_view text, char sep);
double parse_number(std::string_view text);
long long parse_integer(std::string_view text);
std::string format_number(double value);

} // namespace ssd
