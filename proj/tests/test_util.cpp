#include "hdlagent/util.hpp"

#include <doctest.h>

#include <filesystem>

using namespace hdlagent;

TEST_CASE("sha256_hex matches the published test vectors") {
    // FIPS 180-2 appendix vectors.
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("trim strips surrounding whitespace only") {
    CHECK(trim("  a b  ") == "a b");
    CHECK(trim("\n\t x \r\n") == "x");
    CHECK(trim("") == "");
    CHECK(trim("   ") == "");
    CHECK(trim("inner  spacing kept") == "inner  spacing kept");
}

TEST_CASE("split_lines handles trailing newline and empty lines") {
    CHECK(split_lines("a\nb") == std::vector<std::string>{"a", "b"});
    CHECK(split_lines("a\nb\n") == std::vector<std::string>{"a", "b"});
    CHECK(split_lines("a\n\nb") == std::vector<std::string>{"a", "", "b"});
    CHECK(split_lines("") == std::vector<std::string>{});
}

TEST_CASE("join interleaves the separator") {
    CHECK(join({"a", "b", "c"}, "\n\n") == "a\n\nb\n\nc");
    CHECK(join({"solo"}, "--") == "solo");
    CHECK(join({}, "--") == "");
}

TEST_CASE("replace_all substitutes every occurrence") {
    CHECK(replace_all("x {f} y {f}", "{f}", "Z") == "x Z y Z");
    CHECK(replace_all("none", "{f}", "Z") == "none");
}

TEST_CASE("starts_with_word needs a token boundary") {
    CHECK(starts_with_word("module m;", "module"));
    CHECK(starts_with_word("  module m;", "module"));
    CHECK_FALSE(starts_with_word("modules m;", "module"));
    CHECK_FALSE(starts_with_word("mod m;", "module"));
}

TEST_CASE("shares_substring detects long common runs only") {
    std::string source = "the quick brown fox jumps over the lazy dog once more";
    CHECK(shares_substring("prefix the quick brown fox jumps tail", source, 20));
    CHECK_FALSE(shares_substring("the quick", source, 20));
    CHECK_FALSE(shares_substring("completely different text", source, 10));
    CHECK(shares_substring(source, source, source.size()));
}

TEST_CASE("blank_verilog_comments keeps offsets stable") {
    std::string text = "assign y = a; // [3:0] comment\n/* block\nmodule */ wire w;";
    std::string blanked = blank_verilog_comments(text);
    REQUIRE(blanked.size() == text.size());
    CHECK(blanked.find("[3:0]") == std::string::npos);
    CHECK(blanked.find("module") == std::string::npos);
    CHECK(blanked.find("assign y = a;") == 0);
    CHECK(blanked.find("wire w;") != std::string::npos);
    // Newlines survive so line/column positions still line up.
    CHECK(blanked.find('\n') == text.find('\n'));
}

TEST_CASE("blank_verilog_noncode blanks string literals too") {
    std::string text = "initial $display(\"module in a string\"); wire q;";
    std::string blanked = blank_verilog_noncode(text);
    REQUIRE(blanked.size() == text.size());
    CHECK(blanked.find("module") == std::string::npos);
    CHECK(blanked.find("wire q;") != std::string::npos);
}

TEST_CASE("read_file round-trips write_file") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "hdlagent_util_test";
    fs::create_directories(dir);
    fs::path file = dir / "t.txt";
    write_file(file, "line1\nline2\n");
    CHECK(read_file(file) == "line1\nline2\n");
    append_line_locked(file, "line3");
    CHECK(read_file(file) == "line1\nline2\nline3\n");
    fs::remove_all(dir);
}

TEST_CASE("ceil_div rounds up") {
    CHECK(ceil_div(0, 4) == 0);
    CHECK(ceil_div(1, 4) == 1);
    CHECK(ceil_div(4, 4) == 1);
    CHECK(ceil_div(5, 4) == 2);
}
