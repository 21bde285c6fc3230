// Command-line front end. Exit codes: 0 success / positive answer,
// 1 negative answer, 2 usage or parse error, 3 search budget exhausted.
// "gallery:NAME" resolves a built-in entry wherever a file path is accepted.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pccfl/closures.hpp"
#include "pccfl/engine.hpp"
#include "pccfl/gallery.hpp"
#include "pccfl/grammar.hpp"
#include "pccfl/mpda.hpp"
#include "pccfl/pa.hpp"
#include "pccfl/pump.hpp"
#include "pccfl/selftest.hpp"
#include "pccfl/trace.hpp"
#include "pccfl/tree.hpp"

namespace {

using namespace pccfl;

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;
constexpr int kBudget = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool is_gallery_ref(const std::string& spec) {
  return spec.rfind("gallery:", 0) == 0 || spec.rfind("builtin:", 0) == 0;
}

std::string gallery_name(const std::string& spec) {
  return spec.substr(spec.find(':') + 1);
}

// A grammar plus optional letter independence, from a path or a gallery name.
PcgFile load_pcg(const std::string& spec) {
  if (is_gallery_ref(spec)) {
    const GalleryEntry& e = gallery_get(gallery_name(spec));
    if (std::holds_alternative<Grammar>(e.payload))
      return PcgFile{std::get<Grammar>(e.payload), std::nullopt};
    if (std::holds_alternative<CfgWithLetterIndependence>(e.payload)) {
      const auto& c = std::get<CfgWithLetterIndependence>(e.payload);
      return PcgFile{c.grammar, c.independence};
    }
    throw std::runtime_error("gallery entry '" + e.name + "' is not a grammar");
  }
  return parse_pcg_file(spec);
}

PaGrammar load_pag(const std::string& spec) {
  if (is_gallery_ref(spec)) {
    const GalleryEntry& e = gallery_get(gallery_name(spec));
    if (std::holds_alternative<PaGrammar>(e.payload))
      return std::get<PaGrammar>(e.payload);
    throw std::runtime_error("gallery entry '" + e.name + "' is not a PA grammar");
  }
  return parse_pag_file(spec);
}

Mpda load_mpda(const std::string& spec) {
  if (is_gallery_ref(spec))
    throw std::runtime_error("no built-in automata; use to-mpda on a grammar");
  return parse_mpda_file(spec);
}

LanguageOracle load_oracle(const std::string& spec) {
  if (is_gallery_ref(spec)) return gallery_oracle(gallery_name(spec));
  std::filesystem::path p(spec);
  if (p.extension() == ".mpda") return LanguageOracle::from_mpda(load_mpda(spec));
  if (p.extension() == ".pag") return LanguageOracle::from_pa(load_pag(spec));
  return LanguageOracle::from_grammar(load_pcg(spec).grammar);
}

Word word_from_args(const std::vector<std::string>& tokens,
                    const std::vector<std::string>& alphabet) {
  std::string joined;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) joined += ' ';
    joined += tokens[i];
  }
  return parse_word(joined, alphabet);
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::yes: return kOk;
    case Verdict::no: return kNegative;
    case Verdict::budget_exhausted: return kBudget;
  }
  return kUsage;
}

void emit_verdict(Verdict v, bool json) {
  if (json) {
    nlohmann::ordered_json j;
    j["verdict"] = to_string(v);
    std::cout << j.dump() << "\n";
  } else {
    std::cout << to_string(v) << "\n";
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string derivation_text(const Grammar& g, const Derivation& d) {
  std::ostringstream out;
  Engine eng(g);
  Configuration cfg = d.start;
  out << format_word(Word(cfg.symbols.begin(), cfg.symbols.end()));
  Derivation sofar;
  sofar.start = d.start;
  for (const auto& st : d.steps) {
    sofar.steps.push_back(st);
    cfg = eng.replay(sofar);
    if (st.kind == DerivationStep::Kind::swap)
      out << "  -(swap " << st.swap_index << ")->  ";
    else
      out << "  -" << g.productions[st.production].letter << "->  ";
    std::string shown = cfg.symbols.empty()
                            ? "eps"
                            : format_word(Word(cfg.symbols.begin(), cfg.symbols.end()));
    out << shown;
  }
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"toolkit for partially-commutative context-free languages"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json = false;
  app.add_flag("--json", json, "machine-readable output where available");
  std::uint64_t budget = SearchLimits{}.max_states;
  app.add_option("--budget", budget, "visited-state budget for searches");

  // --- validate
  std::string validate_path;
  auto* cmd_validate = app.add_subcommand("validate", "check a grammar file");
  cmd_validate->add_option("grammar", validate_path)->required();

  // --- member
  std::string member_path;
  std::vector<std::string> member_word;
  auto* cmd_member = app.add_subcommand("member", "decide bounded membership");
  cmd_member->add_option("grammar", member_path)->required();
  cmd_member->add_option("word", member_word)->required();

  // --- enumerate
  std::string enum_path;
  int enum_max_len = 0;
  auto* cmd_enum = app.add_subcommand("enumerate", "all words up to a length");
  cmd_enum->add_option("grammar", enum_path)->required();
  cmd_enum->add_option("--max-len", enum_max_len)->required();

  // --- witness
  std::string wit_path, wit_cert_out;
  std::vector<std::string> wit_word;
  auto* cmd_witness =
      app.add_subcommand("witness", "derivation and certificate for a word");
  cmd_witness->add_option("grammar", wit_path)->required();
  cmd_witness->add_option("word", wit_word)->required();
  cmd_witness->add_option("--cert-out", wit_cert_out,
                          "write the certificate as JSON");

  // --- verify-cert
  std::string vc_path, vc_cert;
  std::vector<std::string> vc_word;
  auto* cmd_verify = app.add_subcommand("verify-cert", "check a certificate");
  cmd_verify->add_option("grammar", vc_path)->required();
  cmd_verify->add_option("word", vc_word)->required();
  cmd_verify->add_option("--cert", vc_cert)->required();

  // --- closure constructions
  std::string op_a, op_b, op_out;
  auto add_binop = [&](const std::string& name, const std::string& desc) {
    auto* c = app.add_subcommand(name, desc);
    c->add_option("first", op_a)->required();
    c->add_option("second", op_b)->required();
    c->add_option("-o,--out", op_out, "output .pcg path (default stdout)");
    return c;
  };
  auto* cmd_union = add_binop("union", "grammar for the union");
  auto* cmd_shuffle = add_binop("shuffle", "grammar for the shuffle");
  auto* cmd_concat = add_binop("concat", "grammar for the concatenation");

  std::string subst_path, subst_out;
  std::vector<std::string> subst_maps;
  auto* cmd_subst = app.add_subcommand("subst", "letter substitution");
  cmd_subst->add_option("grammar", subst_path)->required();
  cmd_subst->add_option("--sub", subst_maps, "letter=path.pcg, repeatable")
      ->required();
  cmd_subst->add_option("-o,--out", subst_out);

  std::string hom_path, hom_out;
  std::vector<std::string> hom_maps;
  auto* cmd_hom = app.add_subcommand("hom", "homomorphic image");
  cmd_hom->add_option("grammar", hom_path)->required();
  cmd_hom->add_option("--hom", hom_maps, "letter=image word, repeatable")
      ->required();
  cmd_hom->add_option("-o,--out", hom_out);

  // --- to-mpda
  std::string tompda_path, tompda_out;
  auto* cmd_tompda =
      app.add_subcommand("to-mpda", "multi-pushdown automaton for a grammar "
                                    "with transitive dependence");
  cmd_tompda->add_option("grammar", tompda_path)->required();
  cmd_tompda->add_option("-o,--out", tompda_out);

  // --- mpda run/enum
  auto* cmd_mpda = app.add_subcommand("mpda", "automaton operations");
  cmd_mpda->require_subcommand(1);
  std::string mpda_path;
  std::vector<std::string> mpda_word;
  int mpda_max_len = 0;
  auto* cmd_mpda_run = cmd_mpda->add_subcommand("run", "decide acceptance");
  cmd_mpda_run->add_option("automaton", mpda_path)->required();
  cmd_mpda_run->add_option("word", mpda_word)->required();
  auto* cmd_mpda_enum = cmd_mpda->add_subcommand("enum", "bounded enumeration");
  cmd_mpda_enum->add_option("automaton", mpda_path)->required();
  cmd_mpda_enum->add_option("--max-len", mpda_max_len)->required();

  // --- pa member/enum
  auto* cmd_pa = app.add_subcommand("pa", "PA grammar operations");
  cmd_pa->require_subcommand(1);
  std::string pa_path;
  std::vector<std::string> pa_word;
  int pa_max_len = 0;
  auto* cmd_pa_member = cmd_pa->add_subcommand("member", "decide membership");
  cmd_pa_member->add_option("grammar", pa_path)->required();
  cmd_pa_member->add_option("word", pa_word)->required();
  auto* cmd_pa_enum = cmd_pa->add_subcommand("enum", "bounded enumeration");
  cmd_pa_enum->add_option("grammar", pa_path)->required();
  cmd_pa_enum->add_option("--max-len", pa_max_len)->required();

  // --- trace-closure member/class
  auto* cmd_tc = app.add_subcommand("trace-closure", "trace closures of a CFL");
  cmd_tc->require_subcommand(1);
  std::string tc_path, tc_indep;
  std::vector<std::string> tc_word;
  std::size_t tc_cap = TraceClassLimits{}.max_word_len;
  auto* cmd_tc_member =
      cmd_tc->add_subcommand("member", "membership in the trace closure");
  cmd_tc_member->add_option("grammar", tc_path)->required();
  cmd_tc_member->add_option("word", tc_word)->required();
  cmd_tc_member->add_option("--letter-indep", tc_indep,
                            "pairs like \"b c,a d\"; defaults to the file's "
                            "letter-independence section");
  cmd_tc_member->add_option("--cap", tc_cap, "maximum word length");
  std::string tcc_alphabet;
  auto* cmd_tc_class = cmd_tc->add_subcommand("class", "full trace class");
  cmd_tc_class->add_option("word", tc_word)->required();
  cmd_tc_class->add_option("--letter-indep", tc_indep)->required();
  cmd_tc_class->add_option("--cap", tc_cap);

  // --- pump
  std::string pump_mode = "shuffle", pump_oracle;
  int pump_n = 4, pump_m = 2;
  std::vector<std::string> pump_word;
  auto* cmd_pump = app.add_subcommand("pump", "search for a pumping decomposition");
  cmd_pump->add_option("--mode", pump_mode, "shuffle|shuffle-alt|concat|ccfl");
  cmd_pump->add_option("--N", pump_n, "bound on the repeatable part")->required();
  cmd_pump->add_option("--max-m", pump_m, "largest pumping exponent checked");
  cmd_pump->add_option("--oracle", pump_oracle,
                       "grammar.pcg | automaton.mpda | grammar.pag | "
                       "builtin:NAME | gallery:NAME")
      ->required();
  cmd_pump->add_option("word", pump_word)->required();

  // --- gallery
  auto* cmd_gallery = app.add_subcommand("gallery", "built-in languages");
  cmd_gallery->require_subcommand(1);
  auto* cmd_gal_list = cmd_gallery->add_subcommand("list", "list entries");
  std::string gal_name, gal_dir = ".";
  auto* cmd_gal_get = cmd_gallery->add_subcommand("get", "show one entry");
  cmd_gal_get->add_option("name", gal_name)->required();
  auto* cmd_gal_export = cmd_gallery->add_subcommand("export", "write entry files");
  cmd_gal_export->add_option("name", gal_name)->required();
  cmd_gal_export->add_option("--out-dir", gal_dir);

  // --- selftest
  unsigned selftest_seed = selftest::kDefaultSeed;
  auto* cmd_selftest = app.add_subcommand("selftest", "run the acceptance suite");
  cmd_selftest->add_option("--seed", selftest_seed,
                           "seed for the randomized criteria");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kUsage;
  }

  try {
    if (*cmd_validate) {
      auto file = load_pcg(validate_path);
      auto diags = validate(file.grammar);
      if (json) {
        nlohmann::ordered_json j;
        j["valid"] = diags.empty();
        j["diagnostics"] = nlohmann::ordered_json::array();
        for (const auto& d : diags) j["diagnostics"].push_back(to_string(d));
        std::cout << j.dump() << "\n";
      } else {
        for (const auto& d : diags) std::cout << to_string(d) << "\n";
        std::cout << (diags.empty() ? "valid" : "invalid") << "\n";
      }
      return diags.empty() ? kOk : kNegative;
    }

    if (*cmd_member) {
      Engine eng(load_pcg(member_path).grammar);
      Word w = word_from_args(member_word, eng.letter_names());
      Verdict v = eng.member(w, {budget});
      emit_verdict(v, json);
      return verdict_exit(v);
    }

    if (*cmd_enum) {
      Engine eng(load_pcg(enum_path).grammar);
      auto res = eng.enumerate(enum_max_len, {budget});
      if (json) {
        nlohmann::ordered_json j = nlohmann::ordered_json::array();
        for (const auto& w : res.words) j.push_back(format_word(w));
        std::cout << j.dump() << "\n";
      } else {
        for (const auto& w : res.words) std::cout << format_word(w) << "\n";
      }
      if (res.budget_exhausted) {
        std::cerr << "budget exhausted; enumeration incomplete\n";
        return kBudget;
      }
      return kOk;
    }

    if (*cmd_witness) {
      Grammar g = load_pcg(wit_path).grammar;
      Engine eng(g);
      Word w = word_from_args(wit_word, eng.letter_names());
      auto res = eng.witness(w);
      if (res.budget_exhausted) {
        std::cout << "budget exhausted\n";
        return kBudget;
      }
      if (!res.derivation) {
        std::cout << "no derivation: the word is not in the language\n";
        return kNegative;
      }
      auto [tree, order] = tree_from_derivation(g, *res.derivation);
      Certificate cert{tree, order};
      if (json) {
        nlohmann::ordered_json j;
        j["word"] = format_word(w);
        j["production_steps"] =
            std::count_if(res.derivation->steps.begin(), res.derivation->steps.end(),
                          [](const DerivationStep& s) {
                            return s.kind == DerivationStep::Kind::production;
                          });
        j["certificate"] = certificate_json(cert);
        std::cout << j.dump() << "\n";
      } else {
        std::cout << derivation_text(g, *res.derivation) << "\n";
      }
      if (!wit_cert_out.empty()) write_file(wit_cert_out, certificate_to_json(cert));
      return kOk;
    }

    if (*cmd_verify) {
      Grammar g = load_pcg(vc_path).grammar;
      Engine eng(g);
      Word w = word_from_args(vc_word, eng.letter_names());
      Certificate cert = certificate_from_json(g, slurp(vc_cert));
      bool ok = verify_certificate(g, w, cert);
      emit_verdict(ok ? Verdict::yes : Verdict::no, json);
      return ok ? kOk : kNegative;
    }

    auto emit_grammar = [&](const Grammar& g, const std::string& out_path) {
      std::string text = to_pcg(g);
      if (out_path.empty()) std::cout << text;
      else write_file(out_path, text);
      return kOk;
    };

    if (*cmd_union)
      return emit_grammar(union_of(load_pcg(op_a).grammar, load_pcg(op_b).grammar),
                          op_out);
    if (*cmd_shuffle)
      return emit_grammar(shuffle(load_pcg(op_a).grammar, load_pcg(op_b).grammar),
                          op_out);
    if (*cmd_concat)
      return emit_grammar(concat(load_pcg(op_a).grammar, load_pcg(op_b).grammar),
                          op_out);

    if (*cmd_subst) {
      Grammar g = load_pcg(subst_path).grammar;
      LetterSubstitution s;
      for (const auto& m : subst_maps) {
        auto eq = m.find('=');
        if (eq == std::string::npos)
          throw std::runtime_error("--sub expects letter=path.pcg");
        s.mapping[m.substr(0, eq)] = load_pcg(m.substr(eq + 1)).grammar;
      }
      // Unmapped letters keep themselves.
      for (const auto& a : g.alphabet)
        if (!s.mapping.count(a)) s.mapping[a] = single_word_grammar({a}, "I");
      return emit_grammar(substitute_letters(g, s), subst_out);
    }

    if (*cmd_hom) {
      Grammar g = load_pcg(hom_path).grammar;
      Homomorphism h;
      for (const auto& m : hom_maps) {
        auto eq = m.find('=');
        if (eq == std::string::npos)
          throw std::runtime_error("--hom expects letter=word");
        h.mapping[m.substr(0, eq)] =
            parse_word(m.substr(eq + 1), {g.alphabet.begin(), g.alphabet.end()});
      }
      for (const auto& a : g.alphabet)
        if (!h.mapping.count(a)) h.mapping[a] = {a};
      return emit_grammar(hom_image(g, h), hom_out);
    }

    if (*cmd_tompda) {
      Mpda m = from_transitive_grammar(load_pcg(tompda_path).grammar);
      std::string text = to_mpda_text(m);
      if (tompda_out.empty()) std::cout << text;
      else write_file(tompda_out, text);
      return kOk;
    }

    if (*cmd_mpda_run) {
      Mpda m = load_mpda(mpda_path);
      std::set<std::string> letters;
      for (const auto& t : m.transitions) letters.insert(t.letter);
      Word w = word_from_args(mpda_word, {letters.begin(), letters.end()});
      Verdict v = accepts(m, w, {budget});
      emit_verdict(v, json);
      return verdict_exit(v);
    }
    if (*cmd_mpda_enum) {
      auto res = enumerate_mpda(load_mpda(mpda_path), mpda_max_len, {budget});
      for (const auto& w : res.words) std::cout << format_word(w) << "\n";
      return res.budget_exhausted ? kBudget : kOk;
    }

    if (*cmd_pa_member) {
      PaGrammar g = load_pag(pa_path);
      Word w = word_from_args(pa_word, {g.alphabet.begin(), g.alphabet.end()});
      Verdict v = pa_member(g, w, {budget});
      emit_verdict(v, json);
      return verdict_exit(v);
    }
    if (*cmd_pa_enum) {
      auto res = pa_enumerate(load_pag(pa_path), pa_max_len, {budget});
      for (const auto& w : res.words) std::cout << format_word(w) << "\n";
      return res.budget_exhausted ? kBudget : kOk;
    }

    if (*cmd_tc_member) {
      PcgFile file = load_pcg(tc_path);
      LetterIndependence li;
      if (!tc_indep.empty()) li = parse_letter_independence(tc_indep);
      else if (file.letter_independence) li = *file.letter_independence;
      Engine eng(file.grammar);  // validates; also provides the alphabet
      Word w = word_from_args(tc_word, eng.letter_names());
      TraceClassLimits lims;
      lims.max_word_len = tc_cap;
      Verdict v = closure_member(file.grammar, li, w, lims);
      emit_verdict(v, json);
      return verdict_exit(v);
    }
    if (*cmd_tc_class) {
      LetterIndependence li = parse_letter_independence(tc_indep);
      // No grammar supplies an alphabet here: a bare token is split into
      // characters, multi-character letters are passed space-separated.
      Word w = tc_word;
      if (w.size() == 1 && w[0].size() > 1) {
        Word split;
        for (char c : w[0]) split.push_back(std::string(1, c));
        w = split;
      }
      TraceClassLimits lims;
      lims.max_word_len = tc_cap;
      auto res = trace_class(w, li, lims);
      for (const auto& v : res.words) std::cout << format_word(v) << "\n";
      if (res.budget_exhausted) {
        std::cerr << "cap exceeded; class incomplete\n";
        return kBudget;
      }
      return kOk;
    }

    if (*cmd_pump) {
      LanguageOracle oracle = load_oracle(pump_oracle);
      Word w = word_from_args(pump_word, oracle.alphabet());
      auto report = find_decomposition(oracle, w, pump_n,
                                       pump_mode_from_string(pump_mode), pump_m);
      if (json) {
        std::cout << pump_report_json(report).dump() << "\n";
      } else {
        std::cout << to_string(report.outcome);
        if (report.decomposition) {
          const auto& d = *report.decomposition;
          std::cout << "  x=" << format_word(d.x) << " s=" << format_word(d.s)
                    << " y=" << format_word(d.y);
          if (d.y_alt) std::cout << " y'=" << format_word(*d.y_alt);
          std::cout << " t=" << format_word(d.t) << " z=" << format_word(d.z);
        }
        std::cout << "\n";
      }
      switch (report.outcome) {
        case PumpOutcome::found: return kOk;
        case PumpOutcome::none: return kNegative;
        case PumpOutcome::budget_exhausted: return kBudget;
      }
    }

    if (*cmd_gallery) {
      if (*cmd_gal_list) {
        for (const auto& n : gallery_list()) {
          const auto& e = gallery_get(n);
          std::cout << n << "  [" << e.kind << "]  " << e.description << "\n";
        }
        return kOk;
      }
      if (*cmd_gal_get) {
        const auto& e = gallery_get(gal_name);
        std::cout << e.name << "  [" << e.kind << "]\n" << e.description << "\n";
        try {
          for (const auto& [fname, content] : gallery_export(e.name))
            std::cout << "--- " << fname << "\n" << content;
        } catch (const GalleryError&) {
          // predicate-backed entries have no file form
        }
        return kOk;
      }
      if (*cmd_gal_export) {
        for (const auto& [fname, content] : gallery_export(gal_name)) {
          std::filesystem::path p = std::filesystem::path(gal_dir) / fname;
          write_file(p.string(), content);
          std::cout << p.string() << "\n";
        }
        return kOk;
      }
    }

    if (*cmd_selftest)
      return selftest::run_selftest(std::cout, selftest_seed) ? kOk : kNegative;

  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const GalleryError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const NotTransitiveError& e) {
    std::cerr << e.what() << "\n";
    return kNegative;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
