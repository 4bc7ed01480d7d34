import {
  ApiError,
  CalendarData,
  ConflictPayload,
  RequestFailed,
  WishPayload,
  WishScope,
} from './types.js';

export interface Transport {
  (method: string, path: string, body?: unknown): Promise<{ status: number; body: any }>;
}

/** fetch-backed transport for the browser; tests inject a stub instead. */
export function fetchTransport(baseUrl: string, token: string): Transport {
  return async (method, path, body) => {
    const response = await fetch(baseUrl + path, {
      method,
      headers: {
        Authorization: `Bearer ${token}`,
        'Content-Type': 'application/json',
      },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    return { status: response.status, body: await response.json() };
  };
}

export class ApiClient {
  constructor(private readonly transport: Transport) {}

  private async call<T>(method: string, path: string, body?: unknown): Promise<T> {
    const { status, body: payload } = await this.transport(method, path, body);
    if (status >= 400) {
      throw new RequestFailed(status, payload as ApiError);
    }
    return payload as T;
  }

  calendar(month: string): Promise<CalendarData> {
    return this.call('GET', `/cycles/${month}/calendar`);
  }

  cycleInfo(month: string): Promise<any> {
    return this.call('GET', `/cycles/${month}`);
  }

  submitWish(month: string, date: string, scope: WishScope): Promise<WishPayload> {
    return this.call('POST', `/cycles/${month}/wishes`, { date, scope });
  }

  withdrawWish(wishId: string): Promise<WishPayload> {
    return this.call('DELETE', `/wishes/${wishId}`);
  }

  myConflicts(): Promise<{ conflicts: ConflictPayload[] }> {
    return this.call('GET', '/me/conflicts');
  }

  withdrawInConflict(
    conflictId: string,
    wishId: string,
  ): Promise<{ wish: WishPayload; remaining_conflicts: ConflictPayload[] }> {
    return this.call('POST', `/conflicts/${conflictId}/withdrawals`, { wish_id: wishId });
  }

  autofill(month: string, acknowledgeConflicts = false): Promise<any> {
    return this.call('POST', `/cycles/${month}/autofill`, {
      acknowledge_conflicts: acknowledgeConflicts,
    });
  }

  override(month: string, change: { date: string; shift: string; add?: string[]; remove?: string[] }): Promise<any> {
    return this.call('POST', `/cycles/${month}/overrides`, change);
  }

  release(month: string, asOf: string): Promise<any> {
    return this.call('POST', `/cycles/${month}/release`, { as_of: asOf });
  }
}
