// Copyright 2026 The portalsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "portalsim/scenario/scenario.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace portalsim::scenario {

std::string ScenarioError::message() const {
  return std::to_string(line) + ":" + std::to_string(column) + ": " + code + ": " + detail;
}

namespace {

struct Token {
  std::string text;
  std::size_t col = 0;
};

struct Fail {
  std::string code;
  std::size_t line;
  std::size_t col;
  std::string detail;
};

// Splits on blanks. Double-quoted tokens take \" \\ \n \t escapes; '#' at a
// token start ends the line.
std::vector<Token> tokenize(std::string_view line, std::size_t line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '#') break;
    Token tok;
    tok.col = i + 1;
    if (c == '"') {
      ++i;
      bool closed = false;
      while (i < line.size()) {
        const char d = line[i++];
        if (d == '"') {
          closed = true;
          break;
        }
        if (d != '\\') {
          tok.text += d;
          continue;
        }
        if (i == line.size()) break;
        const char e = line[i++];
        switch (e) {
          case 'n': tok.text += '\n'; break;
          case 't': tok.text += '\t'; break;
          case '"': tok.text += '"'; break;
          case '\\': tok.text += '\\'; break;
          default:
            throw Fail{std::string(kErrSyntax), line_no, i - 1, std::string("unknown escape \\") + e};
        }
      }
      if (!closed) throw Fail{std::string(kErrSyntax), line_no, tok.col, "unterminated string"};
    } else {
      while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') {
        tok.text += line[i++];
      }
    }
    out.push_back(std::move(tok));
  }
  return out;
}

enum class Section {
  kNone,
  kTopology,
  kTechnique,
  kDns,
  kCredentials,
  kZone,
  kSites,
  kRewrite,
  kAuthorized,
  kOptions,
  kScript,
};

std::optional<Section> section_named(std::string_view name) {
  static const std::map<std::string_view, Section> kNames = {
      {"topology", Section::kTopology},   {"technique", Section::kTechnique},
      {"dns", Section::kDns},             {"credentials", Section::kCredentials},
      {"zone", Section::kZone},           {"sites", Section::kSites},
      {"rewrite", Section::kRewrite},     {"authorized", Section::kAuthorized},
      {"options", Section::kOptions},     {"script", Section::kScript},
  };
  auto it = kNames.find(name);
  if (it == kNames.end()) return std::nullopt;
  return it->second;
}

struct PendingStep {
  sim::ScriptStep step;
  std::size_t line;
  Token tick;
  Token host;
};

class Parser {
 public:
  Scenario parse(std::string_view text) {
    std::size_t line_no = 0;
    bool header = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      const std::string_view line = text.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      line_ = line_no;
      auto tokens = tokenize(line, line_no);
      if (tokens.empty()) continue;
      if (!header) {
        if (tokens.size() != 2 || tokens[0].text + " " + tokens[1].text != kScenarioHeader) {
          fail(tokens[0], "expected header '" + std::string(kScenarioHeader) + "'");
        }
        header = true;
        continue;
      }
      if (tokens[0].text.front() == '[') {
        open_section(tokens);
        continue;
      }
      statement(tokens);
    }
    if (!header) throw Fail{std::string(kErrSyntax), 1, 1, "empty scenario"};
    return finish(line_no);
  }

 private:
  [[noreturn]] void fail(const Token& at, const std::string& detail) {
    throw Fail{std::string(kErrSyntax), line_, at.col, detail};
  }

  void expect_count(const std::vector<Token>& t, std::size_t min, std::size_t max,
                    const std::string& usage) {
    if (t.size() < min) fail(t.back(), "too few fields; expected " + usage);
    if (t.size() > max) fail(t[max], "unexpected field; expected " + usage);
  }

  std::uint64_t number(const Token& t, std::string_view text, std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || p != text.data() + text.size() || v < lo || v > hi) {
      fail(t, "expected an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                  "], got '" + std::string(text) + "'");
    }
    return v;
  }
  std::uint64_t number(const Token& t, std::uint64_t lo, std::uint64_t hi) {
    return number(t, t.text, lo, hi);
  }

  net::Ipv4Addr ip(const Token& t) {
    auto v = net::Ipv4Addr::parse(t.text);
    if (!v) fail(t, "bad IPv4 address '" + t.text + "'");
    return *v;
  }

  net::MacAddr mac(const Token& t, std::string_view text) {
    auto v = net::MacAddr::parse(text);
    if (!v) fail(t, "bad MAC address '" + std::string(text) + "'");
    return *v;
  }

  net::DomainName domain(const Token& t) {
    auto v = net::DomainName::parse(t.text);
    if (!v) fail(t, "bad domain name '" + t.text + "': " + v.error().message());
    return *v;
  }

  // "key=value" -> value, failing on any other key.
  std::string_view kv(const Token& t, std::string_view key) {
    const auto eq = t.text.find('=');
    if (eq == std::string::npos || std::string_view(t.text).substr(0, eq) != key) {
      fail(t, "expected " + std::string(key) + "=<value>");
    }
    return std::string_view(t.text).substr(eq + 1);
  }

  void open_section(const std::vector<Token>& t) {
    const auto& name = t[0].text;
    if (t.size() != 1 || name.size() < 3 || name.back() != ']') fail(t[0], "malformed section header");
    auto s = section_named(name.substr(1, name.size() - 2));
    if (!s) fail(t[0], "unknown section " + name);
    if (seen_.count(*s)) fail(t[0], "duplicate section " + name);
    seen_.emplace(*s, line_);
    section_ = *s;
  }

  void statement(const std::vector<Token>& t) {
    switch (section_) {
      case Section::kNone: fail(t[0], "statement outside a section");
      case Section::kTopology: topology(t); break;
      case Section::kTechnique: technique(t); break;
      case Section::kDns: dns(t); break;
      case Section::kCredentials:
        expect_count(t, 2, 2, "<user> <password>");
        s_.services.credentials.add(t[0].text, t[1].text);
        break;
      case Section::kZone:
        expect_count(t, 2, 2, "<domain> <ipv4>");
        zone_.add(domain(t[0]), ip(t[1]));
        break;
      case Section::kSites:
        expect_count(t, 3, 3, "<domain> <ipv4> <page body>");
        s_.topology.sites.push_back({domain(t[0]), ip(t[1]), t[2].text});
        break;
      case Section::kRewrite: rewrite(t); break;
      case Section::kAuthorized:
        expect_count(t, 1, 1, "<mac>");
        s_.preauthorized.push_back(mac(t[0], t[0].text));
        break;
      case Section::kOptions: option(t); break;
      case Section::kScript: script(t); break;
    }
  }

  void topology(const std::vector<Token>& t) {
    auto& topo = s_.topology;
    const auto& kw = t[0].text;
    if (preset_ && kw != "preset") fail(t[0], "a preset topology cannot be extended");
    if (kw == "preset") {
      expect_count(t, 3, 3, "preset fig1 users=<n>");
      if (t[1].text != "fig1") fail(t[1], "unknown preset '" + t[1].text + "'");
      if (preset_ || !topo.hosts.empty() || !topo.switches.empty() || !topo.links.empty()) {
        fail(t[0], "a preset topology cannot be combined with other statements");
      }
      auto sites = std::move(topo.sites);
      topo = sim::fig1_topology(number(t[2], kv(t[2], "users"), 1, 100));
      topo.sites = std::move(sites);
      preset_ = true;
    } else if (kw == "switch") {
      expect_count(t, 3, 3, "switch <name> ports=<n>");
      topo.switches.push_back(
          {t[1].text, static_cast<std::uint16_t>(number(t[2], kv(t[2], "ports"), 1, 4096))});
    } else if (kw == "host") {
      expect_count(t, 4, 4, "host <name> mac=<mac> ip=<ipv4>");
      const auto ip_text = kv(t[3], "ip");
      auto addr = net::Ipv4Addr::parse(ip_text);
      if (!addr) fail(t[3], "bad IPv4 address '" + std::string(ip_text) + "'");
      topo.hosts.push_back({t[1].text, mac(t[2], kv(t[2], "mac")), *addr});
    } else if (kw == "link") {
      expect_count(t, 3, 4, "link <end> <end> [latency=<n>]");
      sim::LinkSpec link{end(t[1]), end(t[2]), 1};
      if (t.size() == 4) link.latency = static_cast<std::uint32_t>(number(t[3], kv(t[3], "latency"), 0, 1000000));
      topo.links.push_back(std::move(link));
    } else if (kw == "servers") {
      expect_count(t, 4, 5, "servers dns=<host> portal=<host> nat=<host> [controller=<host>]");
      topo.servers.dns = std::string(kv(t[1], "dns"));
      topo.servers.portal = std::string(kv(t[2], "portal"));
      topo.servers.nat = std::string(kv(t[3], "nat"));
      if (t.size() == 5) topo.servers.controller = std::string(kv(t[4], "controller"));
    } else {
      fail(t[0], "unknown topology statement '" + kw + "'");
    }
  }

  sim::LinkEnd end(const Token& t) {
    const auto colon = t.text.find(':');
    if (colon == std::string::npos) return {t.text, std::nullopt};
    return {t.text.substr(0, colon),
            static_cast<std::uint16_t>(number(t, std::string_view(t.text).substr(colon + 1), 0, 65535))};
  }

  void technique(const std::vector<Token>& t) {
    expect_count(t, 1, 1, "dns-spoofing | ip-forgery");
    if (technique_) fail(t[0], "technique given twice");
    auto v = portal::parse_technique(t[0].text);
    if (!v) fail(t[0], "unknown technique '" + t[0].text + "'");
    technique_ = *v;
  }

  void dns(const std::vector<Token>& t) {
    if (mode_) fail(t[0], "dns mode given twice");
    mode_line_ = line_;
    mode_ = t[0].text;
    if (mode_ == "spoof-all") {
      expect_count(t, 1, 2, "spoof-all [portal-ip=<ipv4>]");
      if (t.size() == 2) {
        auto v = net::Ipv4Addr::parse(kv(t[1], "portal-ip"));
        if (!v) fail(t[1], "bad IPv4 address");
        spoof_ip_ = *v;
      }
    } else if (mode_ == "proxy" || mode_ == "dnat") {
      expect_count(t, 1, 1, *mode_);
    } else {
      fail(t[0], "unknown dns mode '" + t[0].text + "'");
    }
  }

  void rewrite(const std::vector<Token>& t) {
    expect_count(t, 4, 4, "<udp|tcp> <ip|*>:<port|*> -> <ipv4>[:<port>]");
    dns::RewriteRule rule;
    if (t[0].text == "udp") {
      rule.match.protocol = net::kProtoUdp;
    } else if (t[0].text == "tcp") {
      rule.match.protocol = net::kProtoTcp;
    } else {
      fail(t[0], "expected udp or tcp");
    }
    const auto colon = t[1].text.rfind(':');
    if (colon == std::string::npos) fail(t[1], "expected <ip|*>:<port|*>");
    const std::string host = t[1].text.substr(0, colon);
    const std::string port = t[1].text.substr(colon + 1);
    if (host != "*") {
      auto v = net::Ipv4Addr::parse(host);
      if (!v) fail(t[1], "bad IPv4 address '" + host + "'");
      rule.match.ip_dst = *v;
    }
    if (port != "*") rule.match.l4_dst_port = static_cast<std::uint16_t>(number(t[1], port, 1, 65535));
    if (t[2].text != "->") fail(t[2], "expected '->'");
    const auto to_colon = t[3].text.find(':');
    const std::string to_host = t[3].text.substr(0, to_colon);
    auto v = net::Ipv4Addr::parse(to_host);
    if (!v) fail(t[3], "bad IPv4 address '" + to_host + "'");
    rule.rewrite.new_ip_dst = *v;
    if (to_colon != std::string::npos) {
      rule.rewrite.new_l4_dst_port =
          static_cast<std::uint16_t>(number(t[3], std::string_view(t[3].text).substr(to_colon + 1), 1, 65535));
    }
    rules_.add(std::move(rule));
  }

  bool on_off(const Token& t) {
    if (t.text == "on") return true;
    if (t.text == "off") return false;
    fail(t, "expected on or off");
  }

  void option(const std::vector<Token>& t) {
    expect_count(t, 2, 2, "<option> <value>");
    const auto& key = t[0].text;
    auto& o = s_.options;
    if (key == "budget") {
      s_.budget = number(t[1], 1, 1000000000);
    } else if (key == "tcp-timeout") {
      o.tcp_timeout = number(t[1], 1, 1000000);
    } else if (key == "resolver") {
      o.resolver = ip(t[1]);
    } else if (key == "auth-channel") {
      o.auth_channel = on_off(t[1]);
    } else if (key == "controller-listen") {
      o.controller_listen = number(t[1], 0, 1000000000);
    } else if (key == "max-redirects") {
      o.max_redirects = static_cast<std::uint32_t>(number(t[1], 0, 1000));
    } else if (key == "portal-domain") {
      s_.services.portal_domain = domain(t[1]).str();
      if (s_.services.portal_domain.size() > 1 && s_.services.portal_domain.back() == '.') {
        s_.services.portal_domain.pop_back();
      }
    } else {
      fail(t[0], "unknown option '" + key + "'");
    }
  }

  void script(const std::vector<Token>& t) {
    if (t.size() < 3) fail(t.back(), "expected <tick> <host> <action> ...");
    PendingStep p{{}, line_, t[0], t[1]};
    p.step.at = number(t[0], 0, 1000000000);
    p.step.host = t[1].text;
    const auto& verb = t[2].text;
    if (verb == "http_get") {
      if (t.size() < 4) fail(t[2], "expected http_get <url> [repeat=<n>] [interval=<n>] [max-redirects=<n>]");
      sim::HttpGetAction get;
      get.url = t[3].text;
      if (!net::parse_url(get.url)) fail(t[3], "bad url '" + get.url + "'");
      for (std::size_t i = 4; i < t.size(); ++i) {
        const auto eq = t[i].text.find('=');
        const std::string key = t[i].text.substr(0, eq);
        if (key == "repeat") {
          get.repeat = static_cast<std::uint32_t>(number(t[i], kv(t[i], key), 0, 1000000));
        } else if (key == "interval") {
          get.interval = number(t[i], kv(t[i], key), 1, 1000000);
        } else if (key == "max-redirects") {
          get.max_redirects = static_cast<std::uint32_t>(number(t[i], kv(t[i], key), 0, 1000));
        } else {
          fail(t[i], "unknown http_get option '" + key + "'");
        }
      }
      p.step.action = get;
    } else if (verb == "login") {
      expect_count(t, 5, 5, "login <user> <password>");
      p.step.action = sim::LoginAction{t[3].text, t[4].text};
    } else if (verb == "dns_query") {
      expect_count(t, 4, 4, "dns_query <name>");
      domain(t[3]);
      p.step.action = sim::DnsQueryAction{t[3].text};
    } else {
      fail(t[2], "unknown action '" + verb + "'");
    }
    steps_.push_back(std::move(p));
  }

  std::size_t section_line(Section s) const {
    auto it = seen_.find(s);
    return it == seen_.end() ? 1 : it->second;
  }

  Scenario finish(std::size_t last_line) {
    if (!seen_.count(Section::kTopology)) {
      throw Fail{std::string(kErrSyntax), last_line, 1, "missing section [topology]"};
    }
    if (!technique_) {
      throw Fail{std::string(kErrSyntax), section_line(Section::kTechnique), 1,
                 "missing technique"};
    }
    try {
      sim::validate(s_.topology);
    } catch (const sim::BuildError& e) {
      throw Fail{std::string(kErrTopology), section_line(Section::kTopology), 1, e.what()};
    }

    auto& svc = s_.services;
    svc.technique = *technique_;
    for (const auto& site : s_.topology.sites) {
      if (!zone_.lookup(site.domain)) zone_.add(site.domain, site.ip);
    }
    svc.zone = zone_;
    const bool spoofing = *technique_ == portal::CaptureTechnique::kDnsSpoofing;
    const std::string mode = mode_.value_or(spoofing ? "spoof-all" : "proxy");
    if (spoofing != (mode == "spoof-all")) {
      throw Fail{std::string(kErrTechniqueMode), mode_line_ ? mode_line_ : section_line(Section::kTechnique), 1,
                 std::string(portal::to_string(*technique_)) + " cannot use dns mode " + mode +
                     (spoofing ? "; it pairs with spoof-all" : "; it pairs with proxy or dnat")};
    }
    if (!rules_.rules().empty() && mode != "dnat") {
      throw Fail{std::string(kErrSyntax), section_line(Section::kRewrite), 1,
                 "[rewrite] rules need dns mode dnat"};
    }
    if (mode == "spoof-all") {
      const auto* portal = s_.topology.server(s_.topology.servers.portal);
      svc.dns_mode = dns::mode::SpoofAll{spoof_ip_.value_or(portal ? portal->ip : net::Ipv4Addr{})};
    } else if (mode == "proxy") {
      svc.dns_mode = dns::mode::Proxy{zone_};
    } else {
      svc.dns_mode = dns::mode::Dnat{rules_, zone_};
    }

    sim::Tick last = 0;
    for (auto& p : steps_) {
      if (!s_.topology.host(p.step.host)) {
        throw Fail{std::string(kErrUnknownHost), p.line, p.host.col,
                   "no host named '" + p.step.host + "'"};
      }
      if (s_.topology.role_of(p.step.host) != sim::Role::kUser) {
        throw Fail{std::string(kErrUnknownHost), p.line, p.host.col,
                   "'" + p.step.host + "' is a server, not a user host"};
      }
      if (p.step.at < last) {
        throw Fail{std::string(kErrScriptOrder), p.line, p.tick.col,
                   "tick " + std::to_string(p.step.at) + " is earlier than the previous step's " +
                       std::to_string(last)};
      }
      last = p.step.at;
      s_.script.push_back(std::move(p.step));
    }
    return std::move(s_);
  }

  Scenario s_;
  Section section_ = Section::kNone;
  std::map<Section, std::size_t> seen_;
  std::size_t line_ = 0;
  bool preset_ = false;
  std::optional<portal::CaptureTechnique> technique_;
  std::optional<std::string> mode_;
  std::size_t mode_line_ = 0;
  std::optional<net::Ipv4Addr> spoof_ip_;
  dns::ZoneDb zone_;
  dns::RewriteRuleSet rules_;
  std::vector<PendingStep> steps_;
};

}  // namespace

Result<Scenario, ScenarioError> parse_scenario(std::string_view text) {
  try {
    return Parser().parse(text);
  } catch (const Fail& f) {
    return ScenarioError{f.code, f.line, f.col, f.detail};
  }
}

Result<Scenario, ScenarioError> load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return ScenarioError{std::string(kErrSyntax), 0, 0, "cannot read '" + path + "'"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

ScenarioRun run_scenario(const Scenario& scenario, std::optional<sim::Tick> budget) {
  sim::Network net(scenario.topology, scenario.services, scenario.options);
  for (const auto& mac : scenario.preauthorized) net.fabric().authorize_mac(mac);
  for (const auto& step : scenario.script) net.schedule(step);
  ScenarioRun out;
  out.run = net.run_until_idle(budget.value_or(scenario.budget));
  out.trace = net.trace();
  out.trace_text = net.trace_text();
  out.results = net.results();
  return out;
}

}  // namespace portalsim::scenario
