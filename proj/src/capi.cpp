#include "depsgd.h"

#include <cstring>
#include <string>

#include "harness/config.hpp"
#include "harness/runner.hpp"

using depsgd::harness::RunConfig;

struct depsgd_config {
    std::string text;  // source text, overrides appended
    RunConfig parsed;
};

namespace {

void put_message(char* buf, size_t len, const std::string& msg) {
    if (!buf || len == 0) return;
    const size_t n = std::min(msg.size(), len - 1);
    std::memcpy(buf, msg.data(), n);
    buf[n] = '\0';
}

size_t copy_out(const std::string& s, char* buf, size_t len) {
    put_message(buf, len, s);
    return s.size();
}

depsgd_config* parse_handle(std::string text, char* err, size_t err_len) {
    try {
        RunConfig parsed = depsgd::harness::parse_config(text);
        return new depsgd_config{std::move(text), std::move(parsed)};
    } catch (const std::exception& e) {
        put_message(err, err_len, e.what());
        return nullptr;
    }
}

}  // namespace

extern "C" {

const char* depsgd_version(void) { return "0.1.0"; }

depsgd_config* depsgd_config_from_file(const char* path, char* err, size_t err_len) {
    if (!path) {
        put_message(err, err_len, "null path");
        return nullptr;
    }
    std::string text;
    {
        FILE* f = std::fopen(path, "rb");
        if (!f) {
            put_message(err, err_len, std::string("cannot open config file: ") + path);
            return nullptr;
        }
        char chunk[4096];
        size_t n;
        while ((n = std::fread(chunk, 1, sizeof(chunk), f)) > 0) text.append(chunk, n);
        std::fclose(f);
    }
    return parse_handle(std::move(text), err, err_len);
}

depsgd_config* depsgd_config_from_text(const char* text, char* err, size_t err_len) {
    if (!text) {
        put_message(err, err_len, "null text");
        return nullptr;
    }
    return parse_handle(text, err, err_len);
}

depsgd_config* depsgd_config_from_preset(const char* name, char* err, size_t err_len) {
    if (!name) {
        put_message(err, err_len, "null preset name");
        return nullptr;
    }
    try {
        return parse_handle(depsgd::harness::preset_text(name), err, err_len);
    } catch (const std::exception& e) {
        put_message(err, err_len, e.what());
        return nullptr;
    }
}

int depsgd_config_override(depsgd_config* cfg, const char* dotted_key, const char* value,
                           char* err, size_t err_len) {
    if (!cfg || !dotted_key || !value) {
        put_message(err, err_len, "null argument");
        return DEPSGD_ERR_USAGE;
    }
    try {
        std::string text = depsgd::harness::override_key(cfg->text, dotted_key, value);
        cfg->parsed = depsgd::harness::parse_config(text);
        cfg->text = std::move(text);
        return DEPSGD_OK;
    } catch (const std::exception& e) {
        put_message(err, err_len, e.what());
        return DEPSGD_ERR_PARSE;
    }
}

size_t depsgd_config_describe(const depsgd_config* cfg, char* buf, size_t len) {
    if (!cfg) return copy_out("", buf, len);
    return copy_out(cfg->parsed.canonical_text, buf, len);
}

int depsgd_run(const depsgd_config* cfg, char* report, size_t report_len, char* err,
               size_t err_len) {
    if (!cfg) {
        put_message(err, err_len, "null config");
        return DEPSGD_ERR_USAGE;
    }
    try {
        const depsgd::harness::RunOutcome outcome = depsgd::harness::run(cfg->parsed);
        put_message(report, report_len, outcome.report);
        if (outcome.exit_code != 0) {
            put_message(err, err_len, "verification reported violations");
            return DEPSGD_ERR_RUN;
        }
        return DEPSGD_OK;
    } catch (const std::exception& e) {
        put_message(err, err_len, e.what());
        return DEPSGD_ERR_RUN;
    }
}

size_t depsgd_preset_names(char* buf, size_t len) {
    std::string joined;
    for (const auto& name : depsgd::harness::preset_names()) {
        if (!joined.empty()) joined += '\n';
        joined += name;
    }
    return copy_out(joined, buf, len);
}

void depsgd_config_free(depsgd_config* cfg) { delete cfg; }

}  // extern "C"
