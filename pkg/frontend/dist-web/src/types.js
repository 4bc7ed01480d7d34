/** Payload shapes of the scheduling API. The client renders these verbatim;
 * it never derives counts, conflicts or solutions on its own. */
export class RequestFailed extends Error {
    constructor(status, body) {
        super(`${body.error}: ${body.detail}`);
        this.status = status;
        this.body = body;
    }
}
