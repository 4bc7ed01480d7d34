import { readFileSync } from 'node:fs';
import { join } from 'node:path';

import { ApiClient, Transport } from '../src/api.js';

export interface Recorded {
  status: number;
  body: any;
}

export function fixture(name: string): Recorded {
  const path = join(__dirname, '..', '..', 'fixtures', `${name}.json`);
  return JSON.parse(readFileSync(path, 'utf-8'));
}

/** Transport stub: route table of "METHOD path" -> recorded response. */
export function stubTransport(routes: Record<string, Recorded>): {
  transport: Transport;
  calls: string[];
} {
  const calls: string[] = [];
  const transport: Transport = async (method, path) => {
    const key = `${method} ${path}`;
    calls.push(key);
    const hit = routes[key];
    if (!hit) {
      throw new Error(`no stub for ${key}`);
    }
    return { status: hit.status, body: hit.body };
  };
  return { transport, calls };
}

export function clientFor(routes: Record<string, Recorded>) {
  const { transport, calls } = stubTransport(routes);
  return { api: new ApiClient(transport), calls };
}
