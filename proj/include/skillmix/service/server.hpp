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

#pragma once

#include <atomic>
#include <memory>
#include <string>

#include <boost/asio/io_context.hpp>
#include <boost/asio/ip/tcp.hpp>

#include "skillmix/service/session.hpp"

namespace skillmix::service {

struct ServerOptions {
  std::string host = "127.0.0.1";
  unsigned short port = 8765;  // 0 picks a free port
  double slowdown = 1.0;       // wall-clock seconds per simulated second
  SessionOptions session;
};

/// Websocket front end. Every connection gets its own Session paced by a
/// timer at control rate; all connections share one io_context thread.
class Server {
 public:
  Server(std::shared_ptr<const ServiceModel> model, std::shared_ptr<const lang::Scorer> scorer,
         ServerOptions options);
  ~Server();

  unsigned short port() const { return port_; }
  /// Serves until stop() is called.
  void run();
  /// Safe to call from any thread.
  void stop();

 private:
  void accept();

  std::shared_ptr<const ServiceModel> model_;
  std::shared_ptr<const lang::Scorer> scorer_;
  ServerOptions options_;
  boost::asio::io_context ioc_;
  boost::asio::ip::tcp::acceptor acceptor_;
  unsigned short port_ = 0;
  uint64_t connections_ = 0;
};

}  // namespace skillmix::service
