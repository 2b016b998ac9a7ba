// Test-only utilities: a subprocess runner for the CLI, unique temp
// paths, and a small structural XML/SVG checker kept independent of the
// rendering code.
#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace testutil {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::filesystem::path temp_path(const std::string& stem) {
  static int counter = 0;
  return std::filesystem::temp_directory_path() /
         ("scalelaw_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + "_" + stem);
}

/// Runs the built CLI with the given argument string.
inline CliResult run_cli(const std::string& args) {
  const std::filesystem::path out = temp_path("stdout.txt");
  const std::filesystem::path err = temp_path("stderr.txt");
  const std::string cmd =
      std::string(SCALELAW_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  std::filesystem::remove(out);
  std::filesystem::remove(err);
  return r;
}

/// Minimal XML well-formedness check: matching tags, quoted attributes,
/// valid entity references. Good enough for the SVG documents under test.
inline bool xml_well_formed(const std::string& text, std::string* why = nullptr) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  std::vector<std::string> stack;
  std::size_t i = 0;
  int roots = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '<') {
      if (text.compare(i, 2, "<?") == 0) {
        const std::size_t end = text.find("?>", i);
        if (end == std::string::npos) return fail("unterminated declaration");
        i = end + 2;
        continue;
      }
      if (text.compare(i, 4, "<!--") == 0) {
        const std::size_t end = text.find("-->", i);
        if (end == std::string::npos) return fail("unterminated comment");
        i = end + 3;
        continue;
      }
      // find the matching '>' outside quotes
      std::size_t j = i + 1;
      char quote = 0;
      while (j < text.size() && (quote != 0 || text[j] != '>')) {
        if (quote == 0 && (text[j] == '"' || text[j] == '\'')) quote = text[j];
        else if (text[j] == quote) quote = 0;
        ++j;
      }
      if (j >= text.size()) return fail("unterminated tag");
      std::string tag = text.substr(i + 1, j - i - 1);
      if (quote != 0) return fail("unbalanced quote in tag");
      const bool closing = !tag.empty() && tag.front() == '/';
      const bool self_closing = !tag.empty() && tag.back() == '/';
      if (closing) tag = tag.substr(1);
      if (self_closing) tag.pop_back();
      std::string name;
      for (char t : tag) {
        if (std::isspace(static_cast<unsigned char>(t))) break;
        name += t;
      }
      if (name.empty()) return fail("empty tag name");
      if (closing) {
        if (stack.empty() || stack.back() != name)
          return fail("mismatched closing tag </" + name + ">");
        stack.pop_back();
      } else if (!self_closing) {
        if (stack.empty()) ++roots;
        if (roots > 1) return fail("multiple root elements");
        stack.push_back(name);
      } else if (stack.empty()) {
        ++roots;
        if (roots > 1) return fail("multiple root elements");
      }
      i = j + 1;
    } else if (c == '&') {
      std::size_t j = i + 1;
      while (j < text.size() && j < i + 12 && text[j] != ';') ++j;
      if (j >= text.size() || text[j] != ';') return fail("bad entity reference");
      i = j + 1;
    } else if (c == '>') {
      return fail("stray '>'");
    } else {
      ++i;
    }
  }
  if (!stack.empty()) return fail("unclosed element <" + stack.back() + ">");
  if (roots != 1) return fail("expected exactly one root element");
  return true;
}

/// All element source spans of the given tag carrying class="cls".
inline std::vector<std::string> elements_with_class(const std::string& svg, const std::string& tag,
                                                    const std::string& cls) {
  std::vector<std::string> found;
  const std::string open = "<" + tag;
  const std::string want = "class=\"" + cls + "\"";
  std::size_t pos = 0;
  while ((pos = svg.find(open, pos)) != std::string::npos) {
    const std::size_t end = svg.find('>', pos);
    if (end == std::string::npos) break;
    const std::string span = svg.substr(pos, end - pos + 1);
    if (span.find(want) != std::string::npos) found.push_back(span);
    pos = end + 1;
  }
  return found;
}

/// Numeric attribute values from elements of (tag, class).
inline std::vector<double> attr_values(const std::string& svg, const std::string& tag,
                                       const std::string& cls, const std::string& attr) {
  std::vector<double> values;
  for (const std::string& el : elements_with_class(svg, tag, cls)) {
    const std::string key = " " + attr + "=\"";
    const std::size_t p = el.find(key);
    if (p == std::string::npos) continue;
    values.push_back(std::stod(el.substr(p + key.size())));
  }
  return values;
}

/// The d attribute of the fitted-curve path, parsed into (x, y) pairs.
inline std::vector<std::pair<double, double>> fit_path_points(const std::string& svg) {
  std::vector<std::pair<double, double>> pts;
  const std::vector<std::string> paths = elements_with_class(svg, "path", "fit");
  if (paths.empty()) return pts;
  const std::string& el = paths.front();
  const std::size_t p = el.find(" d=\"");
  if (p == std::string::npos) return pts;
  const std::size_t end = el.find('"', p + 4);
  std::istringstream ss(el.substr(p + 4, end - p - 4));
  std::string tok;
  double x = 0, y = 0;
  while (ss >> tok) {
    if (tok == "M" || tok == "L") {
      ss >> x >> y;
      pts.emplace_back(x, y);
    }
  }
  return pts;
}

}  // namespace testutil
