#ifndef CXRPQ_ERRORS_HPP
#define CXRPQ_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace cxrpq {

// Base for everything thrown by this library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Concrete-syntax problems; `pos` is a 0-based offset into the input text.
struct parse_error : error {
    parse_error(const std::string& msg, std::size_t pos)
        : error(msg + " (at offset " + std::to_string(pos) + ")"), pos(pos) {}
    std::size_t pos;
};

// Structural validation failures (ref-words, conjunctive xregex, queries).
struct validation_error : error {
    explicit validation_error(const std::string& msg) : error(msg) {}
};

struct not_sequential_error : validation_error {
    explicit not_sequential_error(std::string var)
        : validation_error("not sequential: variable '" + var + "' can be defined more than once"),
          variable(std::move(var)) {}
    std::string variable;
};

struct cyclic_error : validation_error {
    explicit cyclic_error(std::vector<std::string> cyc)
        : validation_error("cyclic variable dependencies: " + join(cyc)), cycle(std::move(cyc)) {}
    std::vector<std::string> cycle;

  private:
    static std::string join(const std::vector<std::string>& c) {
        std::string s;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (i) s += " -> ";
            s += c[i];
        }
        return s;
    }
};

struct fragment_error : validation_error {
    using validation_error::validation_error;
};

// Resource guards (expansion ceilings, product state ceilings, mapping spaces).
struct limit_error : error {
    explicit limit_error(const std::string& msg) : error(msg) {}
};

} // namespace cxrpq

#endif
