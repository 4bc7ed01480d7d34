import { ApiClient, fetchTransport } from './api.js';
import { buildCalendarViewModel, renderCalendar } from './calendar.js';
import { buildConflictDialog, renderConflictDialog, withdrawOwnWish } from './conflictDialog.js';
import { buildWishDialog, renderWishDialog, renderWishError, submitWish } from './wishDialog.js';
import { mount } from './vdom.js';
/** Browser bootstrap: one calendar, the wish dialog on day click, and the
 * conflict dialog when the server says we are involved in one. */
export async function start(root, baseUrl, token, month) {
    const api = new ApiClient(fetchTransport(baseUrl, token));
    async function refresh() {
        root.innerHTML = '';
        const data = await api.calendar(month);
        const vm = buildCalendarViewModel(data);
        const dayByDate = new Map(data.days.map((d) => [d.date, d]));
        mount(renderCalendar(vm, (cell) => openWishDialog(dayByDate.get(cell.date), data.quota_remaining, data.wish_examples)), root);
        const mine = await api.myConflicts();
        for (const conflict of mine.conflicts) {
            const model = buildConflictDialog(conflict, tokenWorker());
            mount(renderConflictDialog(model, async (wishId) => {
                await withdrawOwnWish(api, model, wishId);
                await refresh();
            }), root);
        }
    }
    function tokenWorker() {
        // tokens map to worker ids server-side; the UI learns its own id from
        // the first own wish it sees, or data attributes set at login
        return root.dataset.workerId ?? '';
    }
    async function openWishDialog(day, remaining, examples) {
        const dialog = buildWishDialog(day, remaining, examples);
        const host = document.createElement('div');
        root.appendChild(host);
        mount(renderWishDialog(dialog, async (scope) => {
            const result = await submitWish(api, month, dialog, scope);
            if (result.ok) {
                await refresh();
            }
            else {
                mount(renderWishError(result), host);
            }
        }), host);
    }
    await refresh();
}
