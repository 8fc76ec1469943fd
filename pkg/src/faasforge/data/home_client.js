// Smart-home device API client.
//
// Bundled next to the handler so generated code can read and change device
// state without knowing the wire protocol. The API base URL comes from the
// HOME_API_URL environment variable. All helpers are async.

'use strict';

const BASE_URL = process.env.HOME_API_URL || 'http://127.0.0.1:7770';

async function request(method, path, payload) {
  const options = { method, headers: {} };
  if (payload !== undefined) {
    options.headers['Content-Type'] = 'application/json';
    options.body = JSON.stringify(payload);
  }
  const resp = await fetch(BASE_URL.replace(/\/$/, '') + path, options);
  const text = await resp.text();
  if (!resp.ok) {
    throw new Error(`${method} ${path} failed: ${resp.status} ${text}`);
  }
  return text ? JSON.parse(text) : null;
}

// Return the current value of one device attribute.
async function get(device, attribute) {
  const result = await request('GET', `/devices/${device}/${attribute}`);
  return result.value;
}

// Set one device attribute and return the new value.
async function set(device, attribute, value) {
  const result = await request('PUT', `/devices/${device}/${attribute}`, { value });
  return result.value;
}

// Return the list of device ids.
async function devices() {
  return request('GET', '/devices');
}

// Return a {device: {attribute: value}} snapshot of the whole home.
async function state() {
  return request('GET', '/state');
}

module.exports = { get, set, devices, state };
