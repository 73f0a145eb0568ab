#include "ssd/ini.hpp"

#include "ssd/error.hpp"

#include <cctype>
#include <charconv>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace ssd {

std::string trim(std::string_view text)
{
    std::size_t b = 0;
    std::size_t e = text.size();
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) {
        ++b;
    }
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) {
        --e;
    }
    return std::string(text.substr(b, e - b));
}

std::vector<std::string> split(std::string_view text, char sep)
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = text.find(sep, start);
        parts.push_back(trim(text.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return parts;
}

double parse_number(std::string_view text)
{
    std::string s = trim(text);
    if (s.empty()) {
        throw ValidationError("expected a number, got an empty value");
    }
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
        throw ValidationError("expected a finite number, got '" + s + "'");
    }
    return v;
}

long long parse_integer(std::string_view text)
{
    std::string s = trim(text);
    char* end = nullptr;
    errno = 0;
    long long v = std::strtoll(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
        throw ValidationError("expected an integer, got '" + s + "'");
    }
    return v;
}

std::string format_number(double value)
{
    // Shortest representation that round-trips exactly.
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, result.ptr);
}

const IniEntry* IniSection::find(std::string_view key) const
{
    for (const auto& e : entries) {
        if (e.key == key) {
            return &e;
        }
    }
    return nullptr;
}

void IniSection::set(std::string key, std::string value)
{
    for (auto& e : entries) {
        if (e.key == key) {
            e.value = std::move(value);
            return;
        }
    }
    entries.push_back({std::move(key), std::move(value), 0});
}

IniDocument IniDocument::parse(std::string_view text)
{
    IniDocument doc;
    IniSection* current = nullptr;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        std::string_view raw = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        start = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++line_no;

        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') {
            continue;
        }
        auto where = [&] { return "line " + std::to_string(line_no) + ": "; };
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ValidationError(where() + "unterminated section header");
            }
            std::string name = trim(std::string_view(line).substr(1, line.size() - 2));
            if (name.empty()) {
                throw ValidationError(where() + "empty section name");
            }
            if (doc.find(name) != nullptr) {
                throw ValidationError(where() + "duplicate section [" + name + "]");
            }
            doc.sections_.push_back({name, {}, line_no});
            current = &doc.sections_.back();
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError(where() + "expected 'key = value'");
        }
        std::string key = trim(std::string_view(line).substr(0, eq));
        std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) {
            throw ValidationError(where() + "missing key");
        }
        if (current == nullptr) {
            doc.sections_.push_back({"", {}, line_no});
            current = &doc.sections_.back();
        }
        if (current->find(key) != nullptr) {
            throw ValidationError(where() + "duplicate key '" + key + "'");
        }
        current->entries.push_back({key, value, line_no});
    }
    return doc;
}

std::string IniDocument::serialize() const
{
    std::ostringstream out;
    bool first = true;
    for (const auto& s : sections_) {
        if (!first) {
            out << '\n';
        }
        first = false;
        if (!s.name.empty()) {
            out << '[' << s.name << "]\n";
        }
        for (const auto& e : s.entries) {
            out << e.key << " = " << e.value << '\n';
        }
    }
    return out.str();
}

const IniSection* IniDocument::find(std::string_view name) const
{
    for (const auto& s : sections_) {
        if (s.name == name) {
            return &s;
        }
    }
    return nullptr;
}

IniSection& IniDocument::section(std::string_view name)
{
    for (auto& s : sections_) {
        if (s.name == name) {
            return s;
        }
    }
    sections_.push_back({std::string(name), {}, 0});
    return sections_.back();
}

SectionReader::SectionReader(const IniSection* section, std::string context)
    : section_(section), context_(std::move(context))
{
}

bool SectionReader::has(std::string_view key) const
{
    return section_ != nullptr && section_->find(key) != nullptr;
}

const IniEntry* SectionReader::lookup(std::string_view key)
{
    if (section_ == nullptr) {
        return nullptr;
    }
    const IniEntry* e = section_->find(key);
    if (e != nullptr) {
        used_.insert(e->key);
    }
    return e;
}

void SectionReader::fail(const IniEntry& entry, const std::string& what) const
{
    throw ValidationError(context_ + " line " + std::to_string(entry.line) + ": key '" + entry.key +
                          "': " + what);
}

std::optional<std::string> SectionReader::text(std::string_view key)
{
    const IniEntry* e = lookup(key);
    if (e == nullptr) {
        return std::nullopt;
    }
    return e->value;
}

std::string SectionReader::text(std::string_view key, std::string fallback)
{
    auto v = text(key);
    return v ? *v : std::move(fallback);
}

double SectionReader::number(std::string_view key, double fallback)
{
    const IniEntry* e = lookup(key);
    if (e == nullptr) {
        return fallback;
    }
    try {
        return parse_number(e->value);
    } catch (const ValidationError& err) {
        fail(*e, err.what());
    }
}

long long SectionReader::integer(std::string_view key, long long fallback)
{
    const IniEntry* e = lookup(key);
    if (e == nullptr) {
        return fallback;
    }
    try {
        return parse_integer(e->value);
    } catch (const ValidationError& err) {
        fail(*e, err.what());
    }
}

bool SectionReader::boolean(std::string_view key, bool fallback)
{
    const IniEntry* e = lookup(key);
    if (e == nullptr) {
        return fallback;
    }
    if (e->value == "true" || e->value == "1" || e->value == "yes") {
        return true;
    }
    if (e->value == "false" || e->value == "0" || e->value == "no") {
        return false;
    }
    fail(*e, "expected a boolean, got '" + e->value + "'");
}

std::vector<double> SectionReader::numbers(std::string_view key, std::vector<double> fallback)
{
    const IniEntry* e = lookup(key);
    if (e == nullptr) {
        return fallback;
    }
    std::vector<double> out;
    try {
        for (const auto& part : split(e->value, ',')) {
            out.push_back(parse_number(part));
        }
    } catch (const ValidationError& err) {
        fail(*e, err.what());
    }
    return out;
}

std::vector<long long> SectionReader::integers(std::string_view key, std::vector<long long> fallback)
{
    const IniEntry* e = lookup(key);
    if (e == nullptr) {
        return fallback;
    }
    std::vector<long long> out;
    try {
        for (const auto& part : split(e->value, ',')) {
            out.push_back(parse_integer(part));
        }
    } catch (const ValidationError& err) {
        fail(*e, err.what());
    }
    return out;
}

std::vector<IniEntry> SectionReader::take_prefixed(std::string_view prefix)
{
    std::vector<IniEntry> out;
    if (section_ == nullptr) {
        return out;
    }
    for (const auto& e : section_->entries) {
        if (e.key.rfind(prefix, 0) == 0 && used_.count(e.key) == 0) {
            used_.insert(e.key);
            out.push_back(e);
        }
    }
    return out;
}

void SectionReader::finish() const
{
    if (section_ == nullptr) {
        return;
    }
    for (const auto& e : section_->entries) {
        if (used_.count(e.key) == 0) {
            throw ValidationError(context_ + " line " + std::to_string(e.line) + ": unknown key '" +
                                  e.key + "'");
        }
    }
}

} // namespace ssd
