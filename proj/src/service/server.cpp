// Copyright 2026 The skillmix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "skillmix/service/server.hpp"

#include <chrono>
#include <deque>
#include <iostream>

#include <boost/asio/steady_timer.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

namespace skillmix::service {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

namespace {

class Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(tcp::socket socket, std::unique_ptr<Session> session, std::chrono::nanoseconds period)
      : ws_(std::move(socket)), timer_(ws_.get_executor()), session_(std::move(session)), period_(period) {}

  void start() {
    ws_.text(true);
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      self->send(self->session_->hello());
      self->read();
      self->timer_.expires_after(self->period_);
      self->wait();
    });
  }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, size_t) {
      if (ec) {
        self->close();
        return;
      }
      const std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      for (auto& m : self->session_->handle(text)) self->send(m);
      self->read();
    });
  }

  void wait() {
    timer_.async_wait([self = shared_from_this()](beast::error_code ec) {
      if (ec || self->closed_) return;
      for (auto& m : self->session_->tick()) self->send(m);
      self->timer_.expires_at(self->timer_.expiry() + self->period_);
      self->wait();
    });
  }

  void send(const json& message) {
    if (closed_) return;
    outbox_.push_back(message.dump());
    if (outbox_.size() == 1) write();
  }

  void write() {
    ws_.async_write(asio::buffer(outbox_.front()), [self = shared_from_this()](beast::error_code ec, size_t) {
      if (ec) {
        self->close();
        return;
      }
      self->outbox_.pop_front();
      if (!self->outbox_.empty()) self->write();
    });
  }

  void close() {
    closed_ = true;
    timer_.cancel();
    outbox_.clear();
  }

  websocket::stream<beast::tcp_stream> ws_;
  asio::steady_timer timer_;
  beast::flat_buffer buffer_;
  std::unique_ptr<Session> session_;
  std::chrono::nanoseconds period_;
  std::deque<std::string> outbox_;
  bool closed_ = false;
};

}  // namespace

Server::Server(std::shared_ptr<const ServiceModel> model, std::shared_ptr<const lang::Scorer> scorer,
               ServerOptions options)
    : model_(std::move(model)), scorer_(std::move(scorer)), options_(std::move(options)), acceptor_(ioc_) {
  require(model_ != nullptr, "invalid_argument", "server needs a model");
  check_compatible(*model_);
  require(options_.slowdown > 0.0, "invalid_argument", "slowdown must be positive");
  beast::error_code ec;
  const auto address = asio::ip::make_address(options_.host, ec);
  require(!ec, "invalid_argument", "bad host address " + options_.host);
  const tcp::endpoint endpoint(address, options_.port);
  acceptor_.open(endpoint.protocol(), ec);
  if (!ec) acceptor_.set_option(asio::socket_base::reuse_address(true), ec);
  if (!ec) acceptor_.bind(endpoint, ec);
  if (!ec) acceptor_.listen(asio::socket_base::max_listen_connections, ec);
  require(!ec, "bind_failed", "cannot listen on " + options_.host + ":" + std::to_string(options_.port) + ": " +
                                  ec.message());
  port_ = acceptor_.local_endpoint().port();
}

Server::~Server() { stop(); }

void Server::accept() {
  acceptor_.async_accept([this](beast::error_code ec, tcp::socket socket) {
    if (ec) return;
    SessionOptions so = options_.session;
    so.seed = derive_seed(options_.session.seed, connections_++);
    const auto period = std::chrono::duration_cast<std::chrono::nanoseconds>(
        std::chrono::duration<double>(model_->params.control_dt * options_.slowdown));
    try {
      auto session = std::make_unique<Session>(model_, scorer_, so);
      std::make_shared<Connection>(std::move(socket), std::move(session), period)->start();
    } catch (const Error& e) {
      std::cerr << "session refused: " << e.what() << '\n';
    }
    accept();
  });
}

void Server::run() {
  accept();
  ioc_.run();
}

void Server::stop() {
  asio::post(ioc_, [this] {
    beast::error_code ec;
    acceptor_.close(ec);
  });
  ioc_.stop();
}

}  // namespace skillmix::service
