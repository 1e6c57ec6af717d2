#pragma once

// JSON flavor of CLI11's config-file support, so experiment files mirror
// the command-line flags: {"simulate": {"q": 0.5, "trees": 1000}}.

#include <istream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace argwin::cli {

class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
        nlohmann::json j;
        for (const CLI::Option* opt : app->get_options({})) {
            if (!opt->get_lnames().empty() && opt->get_configurable()) {
                const std::string name = opt->get_lnames()[0];
                if (opt->get_type_size() != 0) {
                    if (opt->count() == 1)
                        j[name] = opt->results().at(0);
                    else if (opt->count() > 1)
                        j[name] = opt->results();
                    else if (default_also && !opt->get_default_str().empty())
                        j[name] = opt->get_default_str();
                } else if (opt->count() > 0 || default_also) {
                    j[name] = opt->count() > 0;
                }
            }
        }
        for (const CLI::App* sub : app->get_subcommands({}))
            j[sub->get_name()] =
                nlohmann::json::parse(to_config(sub, default_also, false, ""));
        return j.dump(2);
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        nlohmann::json j = nlohmann::json::parse(input, nullptr, false);
        if (j.is_discarded())
            throw CLI::FileError("config file is not valid JSON");
        return flatten(j, "", {});
    }

private:
    std::vector<CLI::ConfigItem> flatten(const nlohmann::json& j, const std::string& name,
                                         std::vector<std::string> prefix) const {
        std::vector<CLI::ConfigItem> results;
        if (j.is_object()) {
            for (auto it = j.begin(); it != j.end(); ++it) {
                auto deeper = prefix;
                if (!name.empty()) deeper.push_back(name);
                auto sub = flatten(it.value(), it.key(), deeper);
                results.insert(results.end(), sub.begin(), sub.end());
            }
        } else if (!name.empty()) {
            results.emplace_back();
            CLI::ConfigItem& item = results.back();
            item.name = name;
            item.parents = std::move(prefix);
            if (j.is_boolean())
                item.inputs = {j.get<bool>() ? "true" : "false"};
            else if (j.is_number() || j.is_string())
                item.inputs = {j.is_string() ? j.get<std::string>() : j.dump()};
            else if (j.is_array())
                for (const auto& element : j)
                    item.inputs.push_back(element.is_string() ? element.get<std::string>()
                                                              : element.dump());
            else
                throw CLI::ConversionError("cannot convert config entry '" + name + "'");
        } else {
            throw CLI::ConversionError("top-level config values must be objects");
        }
        return results;
    }
};

} // namespace argwin::cli
