#pragma once

#include <limits>
#include <string>
#include <vector>

#include "kerrlab/cli.hpp"

namespace kerrlab::cli {

enum class Kind { number, integer, boolean, string, choice, complex, object, alphabet, emit };

/// One config key: its type, default, numeric bounds, allowed strings and sub-keys.
struct Field {
    Field(std::string key_, Kind kind_, json default_value_)
        : key(std::move(key_)), kind(kind_), default_value(std::move(default_value_)) {}

    std::string key;
    Kind kind;
    json default_value;
    double min = -std::numeric_limits<double>::infinity();
    double max = std::numeric_limits<double>::infinity();
    bool min_exclusive = false;
    std::vector<std::string> choices;
    std::vector<Field> children;
};

const std::vector<std::string>& scenario_names();
std::vector<Field> scenario_fields(const std::string& scenario);

}  // namespace kerrlab::cli
