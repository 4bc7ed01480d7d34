import { RequestFailed, } from './types.js';
/** fetch-backed transport for the browser; tests inject a stub instead. */
export function fetchTransport(baseUrl, token) {
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
    constructor(transport) {
        this.transport = transport;
    }
    async call(method, path, body) {
        const { status, body: payload } = await this.transport(method, path, body);
        if (status >= 400) {
            throw new RequestFailed(status, payload);
        }
        return payload;
    }
    calendar(month) {
        return this.call('GET', `/cycles/${month}/calendar`);
    }
    cycleInfo(month) {
        return this.call('GET', `/cycles/${month}`);
    }
    submitWish(month, date, scope) {
        return this.call('POST', `/cycles/${month}/wishes`, { date, scope });
    }
    withdrawWish(wishId) {
        return this.call('DELETE', `/wishes/${wishId}`);
    }
    myConflicts() {
        return this.call('GET', '/me/conflicts');
    }
    withdrawInConflict(conflictId, wishId) {
        return this.call('POST', `/conflicts/${conflictId}/withdrawals`, { wish_id: wishId });
    }
    autofill(month, acknowledgeConflicts = false) {
        return this.call('POST', `/cycles/${month}/autofill`, {
            acknowledge_conflicts: acknowledgeConflicts,
        });
    }
    override(month, change) {
        return this.call('POST', `/cycles/${month}/overrides`, change);
    }
    release(month, asOf) {
        return this.call('POST', `/cycles/${month}/release`, { as_of: asOf });
    }
}
