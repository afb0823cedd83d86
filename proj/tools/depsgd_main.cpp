// Command-line front end. Talks to the library exclusively through the
// C interface in depsgd.h.

#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "depsgd.h"

namespace {

void usage(FILE* to) {
    std::fprintf(to,
                 "usage: depsgd <regress|sparse|bandit|infer|verify> (--config PATH | --preset NAME)\n"
                 "              [--seed N] [--out DIR] [--plot] [--jobs N] [--set key=value]...\n"
                 "       depsgd presets\n"
                 "       depsgd version\n");
}

struct Cleanup {
    depsgd_config* cfg = nullptr;
    ~Cleanup() { depsgd_config_free(cfg); }
};

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        usage(stderr);
        return 2;
    }
    const std::string command = argv[1];
    if (command == "version" || command == "--version") {
        std::printf("depsgd %s\n", depsgd_version());
        return 0;
    }
    if (command == "presets") {
        char buf[4096];
        depsgd_preset_names(buf, sizeof(buf));
        std::printf("%s\n", buf);
        return 0;
    }
    if (command == "help" || command == "--help" || command == "-h") {
        usage(stdout);
        return 0;
    }

    const bool known_kind = command == "regress" || command == "sparse" || command == "bandit" ||
                            command == "infer" || command == "verify";
    if (!known_kind) {
        std::fprintf(stderr, "unknown subcommand '%s'\n", command.c_str());
        usage(stderr);
        return 2;
    }

    std::string config_path, preset;
    std::vector<std::pair<std::string, std::string>> overrides;
    overrides.emplace_back("run.kind", command);

    for (int i = 2; i < argc; ++i) {
        const std::string arg = argv[i];
        auto next = [&](const char* flag) -> const char* {
            if (i + 1 >= argc) {
                std::fprintf(stderr, "%s needs a value\n", flag);
                std::exit(2);
            }
            return argv[++i];
        };
        if (arg == "--config")
            config_path = next("--config");
        else if (arg == "--preset")
            preset = next("--preset");
        else if (arg == "--seed")
            overrides.emplace_back("run.seed", next("--seed"));
        else if (arg == "--out")
            overrides.emplace_back("run.out", next("--out"));
        else if (arg == "--plot")
            overrides.emplace_back("run.plot", "true");
        else if (arg == "--jobs")
            overrides.emplace_back("run.jobs", next("--jobs"));
        else if (arg == "--scale")
            overrides.emplace_back("run.scale", next("--scale"));
        else if (arg == "--set") {
            const std::string kv = next("--set");
            const std::size_t eq = kv.find('=');
            if (eq == std::string::npos) {
                std::fprintf(stderr, "--set expects key=value, got '%s'\n", kv.c_str());
                return 2;
            }
            overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
        } else {
            std::fprintf(stderr, "unknown flag '%s'\n", arg.c_str());
            usage(stderr);
            return 2;
        }
    }

    if (config_path.empty() == preset.empty()) {
        std::fprintf(stderr, "give exactly one of --config or --preset\n");
        return 2;
    }

    char err[1024] = {0};
    Cleanup guard;
    guard.cfg = config_path.empty() ? depsgd_config_from_preset(preset.c_str(), err, sizeof(err))
                                    : depsgd_config_from_file(config_path.c_str(), err, sizeof(err));
    if (!guard.cfg) {
        std::fprintf(stderr, "error: %s\n", err);
        return 1;
    }
    for (const auto& [key, value] : overrides) {
        if (depsgd_config_override(guard.cfg, key.c_str(), value.c_str(), err, sizeof(err)) !=
            DEPSGD_OK) {
            std::fprintf(stderr, "error: %s\n", err);
            return 1;
        }
    }

    char report[8192] = {0};
    const int rc = depsgd_run(guard.cfg, report, sizeof(report), err, sizeof(err));
    if (report[0]) std::fputs(report, stdout);
    if (rc != DEPSGD_OK) {
        std::fprintf(stderr, "error: %s\n", err);
        return 1;
    }
    return 0;
}
