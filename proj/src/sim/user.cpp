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

#include "internal.hpp"

namespace portalsim::sim {

namespace {

std::optional<std::string> find_form_action(const std::string& body) {
  static const std::string kKey = "form action=";
  auto pos = body.find(kKey);
  if (pos == std::string::npos) return std::nullopt;
  pos += kKey.size();
  auto end = body.find_first_of(" \n", pos);
  return body.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
}

}  // namespace

std::string describe(const Action& action) {
  if (const auto* g = std::get_if<HttpGetAction>(&action)) return "http_get " + g->url;
  if (const auto* l = std::get_if<LoginAction>(&action)) return "login " + l->user;
  return "dns_query " + std::get<DnsQueryAction>(action).name;
}

UserHost::UserHost(NetworkImpl& net, std::size_t index, const HostSpec& spec)
    : Node(net, index, spec, Role::kUser) {
  resolver_ = net.options.resolver ? net.options.resolver : net.dns_ip;
}

void UserHost::enqueue(ScriptStep step) {
  script_.push_back(std::move(step));
  if (!busy_ && script_.size() == 1) start_next();
}

void UserHost::start_next() {
  if (busy_ || script_.empty()) return;
  busy_ = true;
  ++gen_;
  const auto gen = gen_;
  const Tick at = std::max(script_.front().at, net_.now());
  net_.queue.schedule(at, name_ + " " + describe(script_.front().action), [this, gen] {
    if (gen != gen_) return;
    current_ = std::move(script_.front());
    script_.pop_front();
    const auto* get = std::get_if<HttpGetAction>(&current_.action);
    runs_left_ = get ? get->repeat : 1;
    run(current_);
  });
}

void UserHost::run(const ScriptStep& step) {
  ++gen_;
  result_ = ActionResult{};
  result_.host = name_;
  result_.action = describe(step.action);
  result_.started = net_.now();
  rx_.clear();
  conn_.reset();

  if (const auto* get = std::get_if<HttpGetAction>(&step.action)) {
    redirects_left_ = get->max_redirects.value_or(net_.options.max_redirects);
    fetch(net::HttpMethod::kGet, get->url, {});
  } else if (const auto* login = std::get_if<LoginAction>(&step.action)) {
    redirects_left_ = net_.options.max_redirects;
    const std::string url =
        form_action_.value_or("http://" + net_.services.portal_domain + "/login");
    fetch(net::HttpMethod::kPost, url,
          net::encode_form({{"username", login->user}, {"password", login->password}}));
  } else {
    const auto& q = std::get<DnsQueryAction>(step.action);
    const auto gen = gen_;
    resolve(q.name, false, [this, gen](std::optional<net::Ipv4Addr> addr, const std::string& err) {
      if (stale(gen)) return;
      result_.address = addr;
      finish(addr.has_value(), err);
    });
  }
}

void UserHost::finish(bool ok, const std::string& error) {
  cancel_timer();
  if (conn_) tcp_abort(*conn_);
  conn_.reset();
  result_.ok = ok;
  result_.error = error;
  result_.finished = net_.now();
  if (!ok) host_error(error, {{"action", result_.action}});
  net_.results.push_back(result_);
  ++gen_;

  const auto* get = std::get_if<HttpGetAction>(&current_.action);
  const bool forever = get && get->repeat == 0;
  if (forever || runs_left_ > 1) {
    if (!forever) --runs_left_;
    const auto gen = gen_;
    net_.queue.schedule(net_.now() + get->interval, name_ + " " + result_.action,
                        [this, gen] {
                          if (gen != gen_) return;
                          run(current_);
                        });
    return;
  }
  busy_ = false;
  start_next();
}

void UserHost::arm_timer(const std::string& what) {
  cancel_timer();
  const auto gen = gen_;
  timer_ = net_.queue.schedule(net_.now() + net_.options.tcp_timeout, name_ + " timeout " + what,
                               [this, gen] {
                                 timer_.reset();
                                 if (stale(gen)) return;
                                 finish(false, "timeout");
                               });
}

void UserHost::cancel_timer() {
  if (timer_) net_.queue.cancel(*timer_);
  timer_.reset();
}

// DNS

void UserHost::resolve(const std::string& host, bool use_cache, Resolved done) {
  if (auto literal = net::Ipv4Addr::parse(host)) {
    done(*literal, {});
    return;
  }
  auto name = net::DomainName::parse(host);
  if (!name) {
    done(std::nullopt, "bad-name");
    return;
  }
  if (use_cache) {
    auto hit = dns_cache_.find(*name);
    if (hit != dns_cache_.end() && net_.now() < hit->second.expires) {
      done(hit->second.addr, {});
      return;
    }
  }
  if (!resolver_) {
    done(std::nullopt, "no-resolver");
    return;
  }
  net::DnsMessage q;
  q.id = next_dns_id_++;
  q.recursion_desired = true;
  q.questions.push_back({*name, net::kDnsTypeA, net::kDnsClassIn});
  const auto port = ephemeral_port();
  queries_[port] = PendingQuery{q.id, *name, std::move(done)};
  arm_timer("dns");
  send_udp(ip_, port, *resolver_, net::kDnsPort, std::move(net::encode_dns(q)).value());
}

void UserHost::on_udp(const net::Ipv4Packet& pkt, const net::UdpDatagram& udp,
                      const net::EthernetFrame&) {
  auto pending = queries_.find(udp.dst_port);
  if (pending == queries_.end()) return;
  // A resolver only trusts answers from the address it asked.
  if (pkt.src != *resolver_ || udp.src_port != net::kDnsPort) {
    host_error("dns-source-mismatch",
               {{"ip_src", pkt.src.str()}, {"sport", std::to_string(udp.src_port)}});
    return;
  }
  auto msg = net::decode_dns(udp.payload);
  if (!msg || msg->id != pending->second.id) {
    host_error("dns-bad-reply");
    return;
  }
  auto q = std::move(pending->second);
  queries_.erase(pending);
  cancel_timer();
  for (const auto& rec : msg->answers) {
    if (rec.rtype != net::kDnsTypeA || rec.rdata.size() != 4) continue;
    const net::Ipv4Addr addr{{rec.rdata[0], rec.rdata[1], rec.rdata[2], rec.rdata[3]}};
    dns_cache_.insert_or_assign(q.name, CacheEntry{addr, net_.now() + rec.ttl});
    q.done(addr, {});
    return;
  }
  q.done(std::nullopt, "nxdomain");
}

// HTTP client

void UserHost::fetch(net::HttpMethod method, const std::string& url, const std::string& body) {
  auto parsed = net::parse_url(url);
  if (!parsed) {
    finish(false, "bad-url");
    return;
  }
  const auto gen = gen_;
  const net::HttpUrl u = *parsed;
  resolve(u.host, true,
          [this, gen, method, u, url, body](std::optional<net::Ipv4Addr> addr,
                                            const std::string& err) {
            if (stale(gen)) return;
            if (!addr) {
              finish(false, err);
              return;
            }
            exchange(method, u, *addr, url, body);
          });
}

void UserHost::exchange(net::HttpMethod method, const net::HttpUrl& url, net::Ipv4Addr addr,
                        const std::string& text, const std::string& body) {
  net::HttpRequest req;
  req.method = method;
  req.path = url.path;
  req.headers.emplace_back("Host",
                           url.port == net::kHttpPort ? url.host
                                                      : url.host + ":" + std::to_string(url.port));
  if (method == net::HttpMethod::kPost) {
    req.headers.emplace_back("Content-Type", "application/x-www-form-urlencoded");
  }
  req.body = body;

  const auto gen = gen_;
  rx_.clear();
  arm_timer("http");
  TcpHandlers h;
  h.on_established = [this, gen, req, addr, port = url.port](ConnId id) {
    if (stale(gen)) return;
    Attributes a = base_attrs();
    a.merge(http_attrs(req));
    a["peer"] = addr.str() + ":" + std::to_string(port);
    net_.emit(TraceKind::kHttpTx, std::move(a));
    tcp_send(id, net::render_http(req));
  };
  h.on_data = [this, gen, text](ConnId, const std::string& data) {
    if (stale(gen)) return;
    rx_ += data;
    auto n = net::complete_http_length(rx_);
    if (!n) return;
    auto msg = net::parse_http(std::string_view(rx_).substr(0, *n));
    rx_.clear();
    conn_.reset();
    if (!msg || !std::holds_alternative<net::HttpResponse>(*msg)) {
      finish(false, "bad-response");
      return;
    }
    on_response(std::get<net::HttpResponse>(*msg), text);
  };
  conn_ = tcp_connect(addr, url.port, std::move(h));
}

void UserHost::on_response(const net::HttpResponse& resp, const std::string& url) {
  cancel_timer();
  Attributes a = base_attrs();
  a.merge(http_attrs(resp));
  a["url"] = url;
  net_.emit(TraceKind::kHttpRx, std::move(a));
  result_.hops.push_back({url, resp.status});
  if (auto action = find_form_action(resp.body)) form_action_ = *action;

  if (resp.status == 302) {
    auto location = resp.location();
    if (!location) {
      result_.response = resp;
      finish(false, "bad-redirect");
      return;
    }
    if (redirects_left_ == 0) {
      result_.response = resp;
      finish(false, "redirect-limit");
      return;
    }
    --redirects_left_;
    ++result_.redirects;
    fetch(net::HttpMethod::kGet, *location, {});
    return;
  }
  result_.response = resp;
  finish(true, {});
}

}  // namespace portalsim::sim
