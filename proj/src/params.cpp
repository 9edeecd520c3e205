#include <json.hpp>

#include "binbench/binarizers.hpp"

namespace binbench::binarize {

namespace {

using nlohmann::json;

template <typename T>
T get_as(const json& v, const std::string& key) {
    try {
        if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer()) throw InvalidParameter("expected integer");
        } else {
            if (!v.is_number()) throw InvalidParameter("expected number");
        }
        return v.get<T>();
    } catch (const std::exception& e) {
        throw InvalidParameter("params: key '" + key + "': " + e.what());
    }
}

}  // namespace

BinarizerParams params_from_json(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InvalidParameter(std::string("params: malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw InvalidParameter("params: expected a JSON object");

    BinarizerParams p;
    for (const auto& [key, value] : doc.items()) {
        if (key == "method") {
            if (!value.is_string()) throw InvalidParameter("params: 'method' must be a string");
            p.method = parse_method(value.get<std::string>());
        } else if (key == "window") {
            p.window = get_as<int>(value, key);
        } else if (key == "k") {
            if (!value.is_null()) p.k = get_as<double>(value, key);
        } else if (key == "r_dynamic") {
            p.r_dynamic = get_as<double>(value, key);
        } else if (key == "grid_cell") {
            p.grid_cell = get_as<int>(value, key);
        } else if (key == "gamma") {
            p.gamma = get_as<double>(value, key);
        } else if (key == "canny_low") {
            p.canny_low = get_as<double>(value, key);
        } else if (key == "canny_high") {
            p.canny_high = get_as<double>(value, key);
        } else if (key == "canny_sigma") {
            p.canny_sigma = get_as<double>(value, key);
        } else if (key == "min_component") {
            p.min_component = get_as<int>(value, key);
        } else if (key == "edge_density_min") {
            p.edge_density_min = get_as<int>(value, key);
        } else {
            throw InvalidParameter("params: unknown key '" + key + "'");
        }
    }
    p.validate();
    return p;
}

std::string params_to_json(const BinarizerParams& p) {
    json doc{
        {"method", std::string(to_string(p.method))},
        {"window", p.window},
        {"r_dynamic", p.r_dynamic},
        {"grid_cell", p.grid_cell},
        {"gamma", p.gamma},
        {"canny_low", p.canny_low},
        {"canny_high", p.canny_high},
        {"canny_sigma", p.canny_sigma},
        {"min_component", p.min_component},
        {"edge_density_min", p.edge_density_min},
    };
    doc["k"] = p.k ? json(*p.k) : json(nullptr);
    return doc.dump(2);
}

}  // namespace binbench::binarize
