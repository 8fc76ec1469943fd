// HTTP wrapper around a guest handler module.
//
// Injected next to the handler at prepare time. Loads ./fn.js, binds an
// ephemeral loopback port, writes the port number to .port in the working
// directory, and serves:
//
//   GET  /_health  -> 200 "ok"
//   POST /         -> handler result, or 500 with X-Guest-Error on throw

'use strict';

const http = require('node:http');
const fs = require('node:fs');
const path = require('node:path');

const handlerModule = process.env.GUEST_HANDLER_MODULE || 'fn';
const handlerSymbol = process.env.GUEST_HANDLER_SYMBOL || 'fn';

let handler;
try {
  const mod = require(path.join(__dirname, handlerModule + '.js'));
  handler = mod && mod[handlerSymbol];
  if (typeof handler !== 'function' && typeof mod === 'function') {
    handler = mod;
  }
  if (typeof handler !== 'function') {
    console.error(
      `handler symbol '${handlerSymbol}' is not defined or not callable in module '${handlerModule}'`);
    process.exit(3);
  }
} catch (err) {
  console.error(err && err.stack ? err.stack : String(err));
  process.exit(3);
}

function toBuffer(value) {
  if (value === undefined || value === null) return Buffer.alloc(0);
  if (Buffer.isBuffer(value)) return value;
  if (typeof value === 'string') return Buffer.from(value, 'utf8');
  return Buffer.from(JSON.stringify(value), 'utf8');
}

const server = http.createServer((req, res) => {
  if (req.method === 'GET' && req.url === '/_health') {
    res.writeHead(200, { 'Content-Type': 'text/plain' });
    res.end('ok');
    return;
  }
  if (req.method !== 'POST') {
    res.writeHead(404, { 'Content-Type': 'text/plain' });
    res.end('not found');
    return;
  }
  const chunks = [];
  req.on('data', (c) => chunks.push(c));
  req.on('end', async () => {
    const body = Buffer.concat(chunks).toString('utf8');
    try {
      const result = await handler(body);
      const out = toBuffer(result);
      res.writeHead(200, {
        'Content-Type': 'application/octet-stream',
        'Content-Length': out.length,
      });
      res.end(out);
    } catch (err) {
      const text = err && err.stack ? err.stack : String(err);
      console.error(text);
      const out = Buffer.from(text, 'utf8');
      res.writeHead(500, {
        'Content-Type': 'application/octet-stream',
        'Content-Length': out.length,
        'X-Guest-Error': '1',
      });
      res.end(out);
    }
  });
});

server.listen(0, '127.0.0.1', () => {
  const port = server.address().port;
  const portFile = path.join(__dirname, '.port');
  fs.writeFileSync(portFile + '.tmp', String(port));
  fs.renameSync(portFile + '.tmp', portFile);
});
