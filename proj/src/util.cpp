#include "hdlagent/util.hpp"

#include "hdlagent/errors.hpp"

#include <openssl/evp.h>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace hdlagent {

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("sha256 digest failed");
    }
    static const char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write file: " + path.string());
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
        throw IoError("short write: " + path.string());
    }
}

void append_line_locked(const std::filesystem::path& path, std::string_view line) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (fd < 0) {
        throw IoError("cannot open for append: " + path.string());
    }
    ::flock(fd, LOCK_EX);
    std::string buf(line);
    buf.push_back('\n');
    std::size_t off = 0;
    while (off < buf.size()) {
        ssize_t n = ::write(fd, buf.data() + off, buf.size() - off);
        if (n < 0) {
            ::flock(fd, LOCK_UN);
            ::close(fd);
            throw IoError("append failed: " + path.string());
        }
        off += static_cast<std::size_t>(n);
    }
    ::flock(fd, LOCK_UN);
    ::close(fd);
}

std::string trim(std::string_view text) {
    std::size_t b = 0;
    std::size_t e = text.size();
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
    return std::string(text.substr(b, e - b));
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        std::string line(text.substr(start, nl == std::string_view::npos ? std::string_view::npos
                                                                         : nl - start));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    return lines;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out.append(sep);
        out.append(parts[i]);
    }
    return out;
}

bool starts_with_word(std::string_view line, std::string_view word) {
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (line.size() - i < word.size()) return false;
    if (line.compare(i, word.size(), word) != 0) return false;
    std::size_t end = i + word.size();
    if (end == line.size()) return true;
    unsigned char next = static_cast<unsigned char>(line[end]);
    return !(std::isalnum(next) || next == '_');
}

std::string replace_all(std::string text, std::string_view placeholder, std::string_view value) {
    if (placeholder.empty()) return text;
    std::size_t pos = 0;
    while ((pos = text.find(placeholder, pos)) != std::string::npos) {
        text.replace(pos, placeholder.size(), value);
        pos += value.size();
    }
    return text;
}

bool shares_substring(std::string_view text, std::string_view source, std::size_t min_len) {
    if (min_len == 0 || source.size() < min_len || text.size() < min_len) return false;

    // Rolling hash over all min_len-grams of `source`, then slide over `text`.
    const std::uint64_t base = 1099511628211ull;
    std::uint64_t power = 1;
    for (std::size_t i = 1; i < min_len; ++i) power *= base;

    auto hash_at = [&](std::string_view s, std::size_t off) {
        std::uint64_t h = 0;
        for (std::size_t i = 0; i < min_len; ++i) {
            h = h * base + static_cast<unsigned char>(s[off + i]);
        }
        return h;
    };

    std::unordered_set<std::uint64_t> grams;
    grams.reserve(source.size());
    std::uint64_t h = hash_at(source, 0);
    grams.insert(h);
    for (std::size_t i = 1; i + min_len <= source.size(); ++i) {
        h = (h - static_cast<unsigned char>(source[i - 1]) * power) * base +
            static_cast<unsigned char>(source[i + min_len - 1]);
        grams.insert(h);
    }

    std::uint64_t th = hash_at(text, 0);
    for (std::size_t i = 0;; ++i) {
        if (grams.count(th)) {
            // Verify against false positives.
            std::string_view window = text.substr(i, min_len);
            if (source.find(window) != std::string_view::npos) return true;
        }
        if (i + min_len >= text.size()) break;
        th = (th - static_cast<unsigned char>(text[i]) * power) * base +
             static_cast<unsigned char>(text[i + min_len]);
    }
    return false;
}

namespace {

std::string blank_verilog(std::string_view text, bool blank_strings) {
    std::string out(text);
    enum class State { code, line_comment, block_comment, string_lit };
    State state = State::code;
    for (std::size_t i = 0; i < out.size(); ++i) {
        char c = out[i];
        char next = i + 1 < out.size() ? out[i + 1] : '\0';
        switch (state) {
            case State::code:
                if (c == '/' && next == '/') {
                    state = State::line_comment;
                    out[i] = ' ';
                } else if (c == '/' && next == '*') {
                    state = State::block_comment;
                    out[i] = ' ';
                } else if (c == '"') {
                    state = State::string_lit;
                    if (blank_strings) out[i] = ' ';
                }
                break;
            case State::line_comment:
                if (c == '\n') {
                    state = State::code;
                } else {
                    out[i] = ' ';
                }
                break;
            case State::block_comment:
                if (c == '*' && next == '/') {
                    out[i] = ' ';
                    out[i + 1] = ' ';
                    ++i;
                    state = State::code;
                } else if (c != '\n') {
                    out[i] = ' ';
                }
                break;
            case State::string_lit:
                if (c == '\\') {
                    if (blank_strings) {
                        out[i] = ' ';
                        if (i + 1 < out.size() && out[i + 1] != '\n') out[i + 1] = ' ';
                    }
                    ++i;
                } else if (c == '"' || c == '\n') {
                    state = State::code;
                    if (blank_strings && c == '"') out[i] = ' ';
                } else if (blank_strings) {
                    out[i] = ' ';
                }
                break;
        }
    }
    return out;
}

}  // namespace

std::string blank_verilog_comments(std::string_view text) {
    return blank_verilog(text, false);
}

std::string blank_verilog_noncode(std::string_view text) {
    return blank_verilog(text, true);
}

}  // namespace hdlagent
