// Command-line front end: decompositions, memberships, witnesses,
// classification, square classes, Hilbert symbols, census and claim checks.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <string>
#include <vector>

#include <sl2/claims.hpp>

using nlohmann::ordered_json;
using namespace sl2;

namespace {

struct CommonArgs {
  std::string field = "Q";
  std::string inv_text;
  std::string m_text;
  bool tau0 = false;
  std::string format = "text";
  int precision = 0;
};

FieldRef get_field(const CommonArgs& a) {
  FieldRef f = textio::parse_field(a.field);
  if (a.precision > 0 && f->kind == FieldKind::PAdic) f = padic_field(f->p, a.precision);
  return f;
}

InvolutionSpec get_involution(const CommonArgs& a, const FieldRef& f) {
  if (!a.inv_text.empty()) return textio::parse_involution(f, a.inv_text);
  if (a.tau0) return make_tau0(f);
  if (!a.m_text.empty()) return make_involution(f, textio::parse_elem(f, a.m_text));
  fail(Err::ParseError, "an involution is required: --inv, --m, or --tau0");
}

void add_common(CLI::App* cmd, CommonArgs& a, bool with_inv = true) {
  cmd->add_option("--field", a.field, "field spec: Q, F5, F9, Qp3[:N], Q(sqrt 5), F2(t), GF(p,[...])");
  if (with_inv) {
    cmd->add_option("--inv", a.inv_text, "involution: tau(m) or tau0");
    cmd->add_option("--m", a.m_text, "involution datum m (element literal)");
    cmd->add_flag("--tau0", a.tau0, "the char-2 involution");
  }
  cmd->add_option("--precision", a.precision, "working precision for p-adic fields");
  cmd->add_option("--format", a.format, "output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
}

ordered_json mat_json(const Mat2& m) { return mat_to_string(m); }

void emit(const CommonArgs& a, const ordered_json& j, const std::string& text) {
  if (a.format == "json")
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

ordered_json decomp_json(const DecompResult& r) {
  ordered_json j;
  j["order"] = order_name(r.order);
  j["branch"] = branch_name(r.branch);
  j["h"] = mat_json(r.h);
  if (r.order == FactorOrder::HWQ) j["w"] = mat_json(r.w);
  j["q"] = mat_json(r.q);
  j["u"] = mat_json(r.u);
  return j;
}

std::string decomp_text(const DecompResult& r) {
  std::string out;
  out += std::string("order  ") + order_name(r.order) + "\n";
  out += std::string("branch ") + branch_name(r.branch) + "\n";
  out += "h = " + mat_to_string(r.h) + "\n";
  if (r.order == FactorOrder::HWQ) out += "w = " + mat_to_string(r.w) + "\n";
  out += "q = " + mat_to_string(r.q) + "\n";
  out += "u = " + mat_to_string(r.u) + "\n";
  return out;
}

ordered_json verdict_json(const MembershipVerdict& v) {
  ordered_json j;
  j["verdict"] = v.kind == MembershipVerdict::Yes ? "Yes"
               : v.kind == MembershipVerdict::No  ? "No"
                                                  : "Undecided";
  if (v.witness_h) j["h"] = mat_json(*v.witness_h);
  if (v.witness_u) j["u"] = mat_json(*v.witness_u);
  if (!v.certificate.empty()) j["certificate"] = v.certificate;
  if (v.cert_value) j["certificate_value"] = elem_to_string(*v.cert_value);
  return j;
}

std::string verdict_text(const MembershipVerdict& v) {
  std::string out = v.kind == MembershipVerdict::Yes ? "Yes"
                  : v.kind == MembershipVerdict::No  ? "No"
                                                     : "Undecided";
  out += "\n";
  if (v.witness_h) out += "h = " + mat_to_string(*v.witness_h) + "\n";
  if (v.witness_u) out += "u = " + mat_to_string(*v.witness_u) + "\n";
  if (!v.certificate.empty()) out += "certificate: " + v.certificate + "\n";
  if (v.cert_value) out += "certificate value: " + elem_to_string(*v.cert_value) + "\n";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact Cartan/Iwasawa-style factorizations of SL2 over exact fields"};
  app.require_subcommand(1);

  CommonArgs a;
  std::string mat_text, order_text = "auto", set_text = "qt", emulate_text = "exact";
  std::string x_text, a_text, b_text, place_text = "inf", claims_text;
  bool sweep = false, strict = false, ternary = false, list_reps = false;

  CLI::App* c_dec = app.add_subcommand("decompose", "factor g into h, q, u (or h, w, q in char 2)");
  add_common(c_dec, a);
  c_dec->add_option("--mat", mat_text, "matrix e11,e12;e21,e22")->required();
  c_dec->add_option("--order", order_text, "hqu|huq|qhu|quh|uhq|uqh|hwq|auto");

  CLI::App* c_mem = app.add_subcommand("membership", "membership tests for H, Qt, U, T and product sets");
  add_common(c_mem, a);
  c_mem->add_option("--mat", mat_text)->required();
  c_mem->add_option("--set", set_text, "h|qt|u|t|hq|hu|hwu")->required();

  CLI::App* c_wit = app.add_subcommand("witness", "find g with q = g tau(g)^{-1}");
  add_common(c_wit, a);
  c_wit->add_option("--mat", mat_text)->required();
  c_wit->add_option("--emulate", emulate_text, "exact|real|closure");

  CLI::App* c_cls = app.add_subcommand("classify", "normal form tau_m of an inner involution Inn(A)");
  add_common(c_cls, a, false);
  c_cls->add_option("--mat", mat_text, "the conjugating matrix A")->required();

  CLI::App* c_sq = app.add_subcommand("square-class", "square class of an element");
  add_common(c_sq, a, false);
  c_sq->add_option("--x", x_text, "element literal");
  c_sq->add_flag("--reps", list_reps, "list the square class representatives of the field");

  CLI::App* c_hil = app.add_subcommand("hilbert", "Hilbert symbol (a,b) at a place of Q");
  c_hil->add_option("--a", a_text)->required();
  c_hil->add_option("--b", b_text)->required();
  c_hil->add_option("--place", place_text, "prime p or inf");
  c_hil->add_flag("--ternary", ternary, "decide isotropy of a x^2 + b y^2 - z^2 over Q instead");
  c_hil->add_option("--format", a.format)->check(CLI::IsMember({"text", "json"}));

  CLI::App* c_cen = app.add_subcommand("census", "exhaustive sizes and intersections over a finite field");
  add_common(c_cen, a);

  CLI::App* c_ver = app.add_subcommand("verify-claims", "run the claim-verification harness");
  add_common(c_ver, a);
  c_ver->add_option("--claims", claims_text, "comma-separated ids, e.g. C1,C12 (default: all)");
  c_ver->add_flag("--sweep", sweep, "run the default scope sweep instead of a single scope");
  c_ver->add_flag("--strict", strict, "exit 3 when any claim is Refuted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (c_dec->parsed()) {
      FieldRef f = get_field(a);
      InvolutionSpec inv = get_involution(a, f);
      Mat2 g = textio::parse_mat(f, mat_text);
      DecompResult r = [&] {
        if (order_text == "auto")
          return inv.kind == InvKind::TauZeroChar2 ? decompose_char2_finite(g, inv)
                                                   : decompose_hqu(g, inv);
        if (order_text == "hwq") return decompose_char2_finite(g, inv);
        std::string o = order_text;
        for (auto& ch : o) ch = static_cast<char>(std::toupper(ch));
        for (FactorOrder fo : {FactorOrder::HQU, FactorOrder::HUQ, FactorOrder::QHU, FactorOrder::QUH,
                               FactorOrder::UHQ, FactorOrder::UQH}) {
          if (o == order_name(fo)) return decompose_reordered(g, inv, fo);
        }
        fail(Err::ParseError, "bad order: " + order_text);
      }();
      ordered_json j;
      j["command"] = "decompose";
      j["field"] = field_to_string(f);
      j["inv"] = involution_to_string(inv);
      j["input"] = mat_json(g);
      j["result"] = decomp_json(r);
      emit(a, j, "input " + mat_to_string(g) + "\n" + decomp_text(r));
      return 0;
    }
    if (c_mem->parsed()) {
      FieldRef f = get_field(a);
      InvolutionSpec inv = get_involution(a, f);
      Mat2 g = textio::parse_mat(f, mat_text);
      ordered_json j;
      j["command"] = "membership";
      j["field"] = field_to_string(f);
      j["inv"] = involution_to_string(inv);
      j["set"] = set_text;
      j["input"] = mat_json(g);
      std::string text;
      if (set_text == "h" || set_text == "qt" || set_text == "u" || set_text == "t") {
        bool r = set_text == "h"    ? in_fixed_group(inv, g)
                 : set_text == "qt" ? in_extended_symmetric(inv, g)
                 : set_text == "u"  ? in_unipotent(g)
                                    : in_torus(g);
        j["result"] = r;
        text = r ? "true\n" : "false\n";
      } else {
        MembershipVerdict v = set_text == "hq"    ? requires_unipotent(g, inv)
                              : set_text == "hu"  ? decompose_hu(g, inv)
                              : set_text == "hwu" ? member_hwu(g, inv)
                                                  : (fail(Err::ParseError, "bad set: " + set_text),
                                                     MembershipVerdict::undecided(""));
        j["result"] = verdict_json(v);
        text = verdict_text(v);
      }
      emit(a, j, "input " + mat_to_string(g) + "\n" + text);
      return 0;
    }
    if (c_wit->parsed()) {
      FieldRef f = get_field(a);
      InvolutionSpec inv = get_involution(a, f);
      Mat2 q = textio::parse_mat(f, mat_text);
      EmulationMode mode = emulate_text == "real"      ? EmulationMode::RealEmulated
                           : emulate_text == "closure" ? EmulationMode::ClosureEmulated
                                                       : EmulationMode::Exact;
      WitnessResult w = witness_in_Q(q, inv, mode);
      ordered_json j;
      j["command"] = "witness";
      j["field"] = field_to_string(f);
      j["inv"] = involution_to_string(inv);
      j["input"] = mat_json(q);
      j["verdict"] = w.verdict == MembershipVerdict::Yes ? "Yes"
                     : w.verdict == MembershipVerdict::No ? "No"
                                                          : "Undecided";
      j["witness_field"] = field_to_string(w.witness_field);
      if (w.witness) j["witness"] = mat_json(*w.witness);
      if (!w.certificate.empty()) j["certificate"] = w.certificate;
      std::string text = std::string(j["verdict"].get<std::string>()) + "\n";
      text += "witness field: " + field_to_string(w.witness_field) + "\n";
      if (w.witness) text += "g = " + mat_to_string(*w.witness) + "\n";
      if (!w.certificate.empty()) text += "certificate: " + w.certificate + "\n";
      emit(a, j, "input " + mat_to_string(q) + "\n" + text);
      return 0;
    }
    if (c_cls->parsed()) {
      FieldRef f = get_field(a);
      Mat2 A = textio::parse_mat(f, mat_text);
      InvolutionFromMatrix r = involution_from_matrix(A);
      ordered_json j;
      j["command"] = "classify";
      j["field"] = field_to_string(f);
      j["input"] = mat_json(A);
      j["involution"] = involution_to_string(r.spec);
      if (r.spec.cls) j["square_class"] = r.spec.cls->label + " (rep " + elem_to_string(r.spec.cls->rep) + ")";
      j["conjugator"] = mat_json(r.conjugator);
      std::string text = involution_to_string(r.spec) + "\n";
      if (r.spec.cls) text += "square class: " + r.spec.cls->label + " (rep " + elem_to_string(r.spec.cls->rep) + ")\n";
      text += "conjugator: " + mat_to_string(r.conjugator) + "\n";
      emit(a, j, text);
      return 0;
    }
    if (c_sq->parsed()) {
      FieldRef f = get_field(a);
      ordered_json j;
      j["command"] = "square-class";
      j["field"] = field_to_string(f);
      std::string text;
      if (list_reps) {
        SquareClassList reps = square_class_reps(f);
        if (reps.unbounded) {
          j["reps"] = "unbounded";
          text = "unbounded (classifier available per element)\n";
        } else {
          ordered_json arr = ordered_json::array();
          for (const SquareClassRep& r : reps.reps) {
            arr.push_back({{"label", r.label}, {"rep", elem_to_string(r.rep)}});
            text += r.label + " : " + elem_to_string(r.rep) + "\n";
          }
          j["reps"] = arr;
        }
      } else {
        require(!x_text.empty(), Err::ParseError, "--x or --reps is required");
        Elem x = textio::parse_elem(f, x_text);
        SquareClassRep r = square_class(x);
        j["input"] = elem_to_string(x);
        j["label"] = r.label;
        j["rep"] = elem_to_string(r.rep);
        j["is_square"] = is_square(x);
        text = "class " + r.label + " (rep " + elem_to_string(r.rep) + ")\n";
      }
      emit(a, j, text);
      return 0;
    }
    if (c_hil->parsed()) {
      mpq_class qa = textio::parse_mpq(a_text), qb = textio::parse_mpq(b_text);
      ordered_json j;
      j["command"] = "hilbert";
      j["a"] = qa.get_str();
      j["b"] = qb.get_str();
      std::string text;
      if (ternary) {
        bool iso = is_isotropic_ternary(qa, qb);
        j["isotropic"] = iso;
        text = iso ? "isotropic\n" : "anisotropic\n";
      } else {
        Place pl = place_text == "inf" ? Place::at_infinity()
                                       : Place::at_prime(std::stoll(place_text));
        int s = hilbert_symbol(qa, qb, pl);
        j["place"] = place_text;
        j["symbol"] = s;
        text = (s > 0 ? "+1" : "-1") + std::string("\n");
      }
      emit(a, j, text);
      return 0;
    }
    if (c_cen->parsed()) {
      FieldRef f = get_field(a);
      InvolutionSpec inv = get_involution(a, f);
      GroupCensus c = census_report(f, inv);
      if (a.format == "json") {
        ordered_json j;
        j["command"] = "census";
        j["field"] = field_to_string(f);
        j["inv"] = involution_to_string(inv);
        j["sizes"] = c.sizes;
        j["intersections"] = c.intersection_sizes;
        if (c.orbit_cover_meaningful) {
          j["orbit_cover"] = c.orbit_cover;
          ordered_json arr = ordered_json::array();
          for (auto& [rep, size] : c.orbit_partition) arr.push_back({{"rep", rep}, {"size", size}});
          j["orbits"] = arr;
        }
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << census_to_string(c);
      }
      return 0;
    }
    if (c_ver->parsed()) {
      std::vector<std::string> ids;
      if (!claims_text.empty()) {
        for (const std::string& part : textio::split_top(claims_text, ',')) {
          ids.push_back(textio::strip(part));
        }
      }
      std::vector<ClaimStatus> results;
      if (sweep) {
        for (const SweepScope& sc : default_sweep_scopes()) {
          std::vector<ClaimStatus> r = run_claims(sc.field, sc.inv, ids);
          results.insert(results.end(), r.begin(), r.end());
        }
      } else {
        FieldRef f = get_field(a);
        InvolutionSpec inv = get_involution(a, f);
        results = run_claims(f, inv, ids);
      }
      bool any_refuted = false;
      for (const ClaimStatus& st : results)
        if (st.verdict == Verdict::Refuted) any_refuted = true;
      if (a.format == "json") {
        ordered_json arr = ordered_json::array();
        std::sort(results.begin(), results.end(), claim_id_less);
        for (const ClaimStatus& st : results) {
          ordered_json j;
          j["id"] = st.claim_id;
          j["scope"] = st.scope;
          j["verdict"] = verdict_name(st.verdict);
          j["statement"] = st.statement;
          j["detail"] = st.detail;
          ordered_json ce = ordered_json::array();
          for (auto& [k, v] : st.counterexample) ce.push_back({{"label", k}, {"value", v}});
          j["counterexample"] = ce;
          arr.push_back(j);
        }
        std::cout << arr.dump(2) << "\n";
      } else {
        std::cout << render_claims(results);
      }
      return strict && any_refuted ? 3 : 0;
    }
  } catch (const Sl2Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
